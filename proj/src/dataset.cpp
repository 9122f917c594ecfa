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

#include "kovec/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kovec/errors.hpp"

namespace kovec {

namespace {

int intern_label(std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  names.push_back(name);
  return static_cast<int>(names.size()) - 1;
}

}  // namespace

Dataset load_classification_tsv(const std::string& path,
                                std::vector<std::string>* label_names) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset: " + path);
  Dataset data;
  data.tagging = false;
  if (label_names) data.labels = *label_names;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected `label<TAB>text`");
    LabeledExample ex;
    ex.label = intern_label(data.labels, line.substr(0, tab));
    std::istringstream words(line.substr(tab + 1));
    std::string w;
    while (words >> w) ex.words.push_back(w);
    if (ex.words.empty())
      throw ParseError(path + ":" + std::to_string(line_no) + ": empty text");
    data.examples.push_back(std::move(ex));
  }
  if (label_names) *label_names = data.labels;
  return data;
}

Dataset load_tagging_file(const std::string& path,
                          std::vector<std::string>* label_names) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset: " + path);
  Dataset data;
  data.tagging = true;
  if (label_names) data.labels = *label_names;
  LabeledExample current;
  std::string line;
  int line_no = 0;
  auto flush = [&]() {
    if (!current.words.empty()) {
      data.examples.push_back(std::move(current));
      current = LabeledExample{};
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected `token<TAB>tag`");
    current.words.push_back(line.substr(0, tab));
    current.tags.push_back(intern_label(data.labels, line.substr(tab + 1)));
  }
  flush();
  if (label_names) *label_names = data.labels;
  return data;
}

void save_classification_tsv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset: " + path);
  for (const LabeledExample& ex : data.examples) {
    out << data.labels.at(static_cast<std::size_t>(ex.label));
    for (std::size_t i = 0; i < ex.words.size(); ++i)
      out << (i == 0 ? '\t' : ' ') << ex.words[i];
    out << '\n';
  }
}

void save_tagging_file(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset: " + path);
  for (const LabeledExample& ex : data.examples) {
    for (std::size_t i = 0; i < ex.words.size(); ++i)
      out << ex.words[i] << '\t'
          << data.labels.at(static_cast<std::size_t>(ex.tags[i])) << '\n';
    out << '\n';
  }
}

Dataset oov_subset(const Dataset& data,
                   const std::unordered_set<std::string>& reference_vocab) {
  Dataset out;
  out.tagging = data.tagging;
  out.labels = data.labels;
  for (const LabeledExample& ex : data.examples) {
    bool has_oov = false;
    for (const std::string& w : ex.words)
      if (!reference_vocab.count(w)) {
        has_oov = true;
        break;
      }
    if (has_oov) out.examples.push_back(ex);
  }
  return out;
}

std::unordered_set<std::string> load_vocab_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open vocabulary: " + path);
  std::unordered_set<std::string> vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) vocab.insert(line);
  }
  return vocab;
}

}  // namespace kovec
