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

#ifndef KOVEC_TOKENIZE_HPP_
#define KOVEC_TOKENIZE_HPP_

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kovec {

// Morpheme piece vocabulary. Continuation pieces carry a `##` prefix.
// Segmentation is total by construction: a position with no vocabulary match
// falls back to a single-character piece, so no explicit per-syllable
// entries are required.
struct MorphemeVocab {
  std::unordered_set<std::string> tokens;
  int max_token_len = 1;  // characters, longest piece without its ## prefix

  static MorphemeVocab load(const std::string& path);
  static MorphemeVocab from_tokens(const std::vector<std::string>& tokens);

  bool contains(const std::string& token) const {
    return tokens.count(token) != 0;
  }
};

// Greedy longest-match segmentation, left to right. Pieces after the first
// carry `##`. Empty word yields an empty list.
std::vector<std::string> segment(std::string_view word,
                                 const MorphemeVocab& vocab);

// Jamo symbols of the word followed by its morpheme pieces.
struct MixedTokenSequence {
  std::vector<std::string> tokens;
  std::string source;
};

MixedTokenSequence build_mixed_input(std::string_view word,
                                     const MorphemeVocab& vocab);

// Maps surface symbols (jamo, morpheme pieces, IPA) to dense ids.
// Id 0 is padding, id 1 the unknown symbol; the rest are assigned by
// descending frequency with lexicographic tie-break, so construction is
// deterministic for a fixed corpus.
class SymbolTable {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;

  SymbolTable();

  // Returns the id, inserting nothing; unknown symbols map to kUnkId.
  int lookup(const std::string& symbol) const;
  std::vector<int> lookup(const std::vector<std::string>& symbols) const;

  int size() const { return static_cast<int>(id_to_symbol_.size()); }
  const std::string& symbol(int id) const { return id_to_symbol_.at(id); }

  void save(const std::string& path) const;
  static SymbolTable load(const std::string& path);

  friend SymbolTable build_symbol_table(
      const std::vector<std::vector<std::string>>& sequences);

 private:
  std::vector<std::string> id_to_symbol_;
  std::unordered_map<std::string, int> symbol_to_id_;
};

// Builds the table from token sequences (frequency then lexicographic order).
SymbolTable build_symbol_table(
    const std::vector<std::vector<std::string>>& sequences);

std::string default_morpheme_vocab_path();

}  // namespace kovec

#endif  // KOVEC_TOKENIZE_HPP_
