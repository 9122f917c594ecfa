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

#ifndef KOVEC_EMBEDDINGS_HPP_
#define KOVEC_EMBEDDINGS_HPP_

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

namespace kovec {

// Target word embeddings: the vocabulary and one d-dimensional vector per
// word. No duplicate words, all entries finite.
struct EmbeddingTable {
  std::vector<std::string> words;
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      vectors;  // |V| x d
  int dim = 0;
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(words.size()); }
  // Row index of a word, -1 if absent.
  int find(const std::string& word) const {
    auto it = index.find(word);
    return it == index.end() ? -1 : it->second;
  }
  void rebuild_index();
};

// word2vec text format: first line `count dim`, then `word v1 ... vd`.
// Malformed lines raise ParseError with the line number; a vector of the
// wrong width raises DimMismatch.
EmbeddingTable load_embeddings(const std::string& path);
void save_embeddings(const std::string& path, const EmbeddingTable& table);

// Index of the row with the highest cosine similarity to `query`.
int nearest_neighbor_cosine(const EmbeddingTable& table,
                            const Eigen::VectorXf& query);

}  // namespace kovec

#endif  // KOVEC_EMBEDDINGS_HPP_
