// Copyright 2026 The kovec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kovec/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "kovec/errors.hpp"

namespace kovec {

void EmbeddingTable::rebuild_index() {
  index.clear();
  for (std::size_t i = 0; i < words.size(); ++i)
    index[words[i]] = static_cast<int>(i);
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open embeddings: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path + ":1: missing `count dim` header");
  long long count = -1;
  int dim = -1;
  {
    std::istringstream head(line);
    std::string extra;
    if (!(head >> count >> dim) || (head >> extra) || count < 0 || dim <= 0)
      throw ParseError(path + ":1: bad `count dim` header");
  }
  EmbeddingTable table;
  table.dim = dim;
  table.words.reserve(static_cast<std::size_t>(count));
  table.vectors.resize(count, dim);
  int line_no = 1;
  long long row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (row >= count)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": more rows than the header declared");
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word))
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty row");
    if (table.index.count(word))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": duplicate word '" + word + "'");
    int got = 0;
    float v = 0.f;
    while (fields >> v) {
      if (got < dim) table.vectors(row, got) = v;
      ++got;
    }
    if (!fields.eof())
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": non-numeric vector entry");
    if (got != dim)
      throw DimMismatch(path + ":" + std::to_string(line_no) + ": word '" +
                        word + "' has " + std::to_string(got) +
                        " values, want " + std::to_string(dim));
    if (!table.vectors.row(row).allFinite())
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": non-finite vector entry");
    table.index[word] = static_cast<int>(row);
    table.words.push_back(word);
    ++row;
  }
  if (row != count)
    throw ParseError(path + ": header declares " + std::to_string(count) +
                     " words but file has " + std::to_string(row));
  return table;
}

void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write embeddings: " + path);
  out.precision(9);
  out << table.size() << ' ' << table.dim << '\n';
  for (int i = 0; i < table.size(); ++i) {
    out << table.words[i];
    for (int j = 0; j < table.dim; ++j) out << ' ' << table.vectors(i, j);
    out << '\n';
  }
}

int nearest_neighbor_cosine(const EmbeddingTable& table,
                            const Eigen::VectorXf& query) {
  if (table.size() == 0) throw EmptyDataset("empty embedding table");
  if (query.size() != table.dim)
    throw DimMismatch("query dim " + std::to_string(query.size()) +
                      " vs table dim " + std::to_string(table.dim));
  float qn = query.norm();
  int best = 0;
  float best_score = -std::numeric_limits<float>::infinity();
  for (int i = 0; i < table.size(); ++i) {
    float denom = qn * table.vectors.row(i).norm();
    float score = denom > 0.f ? table.vectors.row(i).dot(query) / denom : 0.f;
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

}  // namespace kovec
