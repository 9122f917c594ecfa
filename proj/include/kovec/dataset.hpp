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

#ifndef KOVEC_DATASET_HPP_
#define KOVEC_DATASET_HPP_

#include <string>
#include <unordered_set>
#include <vector>

namespace kovec {

// One classified sentence (label >= 0, tags empty) or one tagged sentence
// (label == -1, one tag id per word).
struct LabeledExample {
  std::vector<std::string> words;
  int label = -1;
  std::vector<int> tags;
};

struct Dataset {
  bool tagging = false;
  std::vector<LabeledExample> examples;
  std::vector<std::string> labels;  // id -> name (classes or tag set)

  int num_classes() const { return static_cast<int>(labels.size()); }
  std::size_t size() const { return examples.size(); }
};

// `label <TAB> whitespace-tokenized text`, one example per line. When
// `label_names` is given it acts as a shared label space: known names keep
// their ids, new ones are appended (so train/dev/test agree on ids).
Dataset load_classification_tsv(const std::string& path,
                                std::vector<std::string>* label_names = nullptr);

// One `token <TAB> tag` per line, blank line between sentences.
Dataset load_tagging_file(const std::string& path,
                          std::vector<std::string>* label_names = nullptr);

void save_classification_tsv(const std::string& path, const Dataset& data);
void save_tagging_file(const std::string& path, const Dataset& data);

// Examples containing at least one word absent from the reference
// vocabulary.
Dataset oov_subset(const Dataset& data,
                   const std::unordered_set<std::string>& reference_vocab);

// Reference vocabulary file: one word per line.
std::unordered_set<std::string> load_vocab_file(const std::string& path);

}  // namespace kovec

#endif  // KOVEC_DATASET_HPP_
