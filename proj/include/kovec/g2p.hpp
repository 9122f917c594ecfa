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

#ifndef KOVEC_G2P_HPP_
#define KOVEC_G2P_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace kovec {

// IPA rendering of one word.
struct PhonemeSequence {
  std::vector<std::string> phonemes;
  std::string source;
  // Set when the input contained characters that contribute no phonemes.
  bool skipped_non_hangul = false;
};

// Contextual rewrite over a syllable boundary: conditions on the left
// syllable's tail and the right syllable's lead/vowel (or word end),
// plus the replacement. Loaded from the rule-table file.
struct PhonRule {
  int stage = 0;
  std::string name;
  std::uint32_t tail_mask = 0;   // bit t for tail index t (0 = no tail)
  std::uint32_t lead_mask = 0;   // bits 0..18 leads, bit 19 = word end
  std::uint32_t vowel_mask = 0;  // bits 0..20
  std::optional<int> set_tail;
  std::optional<int> set_lead;
  std::optional<int> set_vowel;
  bool lead_from_tail = false;  // rewrite token l=$t (liaison move)
  int line = 0;
};

// Compiled grapheme-to-phoneme transducer. Immutable after load; to_ipa is
// pure and safe for concurrent use.
//
// The rule file holds one rule per line, `stage TAB name TAB pattern TAB
// rewrite`, with `#` comment lines. Stages 1..6 are contextual rewrites
// applied in order (coda neutralization, liaison, assimilation,
// tensification, aspiration, palatalization); stage 7 maps each remaining
// jamo to IPA. The loader lints the table: two rules of the same stage may
// never match the same context, every jamo reachable after stage 6 must have
// a stage-7 mapping, and every emitted symbol must be in the inventory file.
class RuleTable {
 public:
  static RuleTable load(const std::string& rules_path,
                        const std::string& inventory_path);

  PhonemeSequence to_ipa(std::string_view word) const;

  const std::vector<std::string>& inventory() const { return inventory_; }
  std::size_t rule_count() const { return rules_.size(); }

 private:
  RuleTable() = default;
  void lint() const;

  std::vector<PhonRule> rules_;  // stages 1..6, in file order
  // Stage-7 maps; empty vector = maps to nothing (silent onset).
  std::vector<std::optional<std::vector<std::string>>> lead_ipa_;
  std::vector<std::optional<std::vector<std::string>>> vowel_ipa_;
  std::vector<std::optional<std::vector<std::string>>> tail_ipa_;
  std::vector<std::string> inventory_;
  std::unordered_set<std::string> inventory_set_;
};

// Symbol-level Levenshtein distance between two phoneme sequences.
int pronunciation_distance(const PhonemeSequence& a, const PhonemeSequence& b);
int pronunciation_distance(const std::vector<std::string>& a,
                           const std::vector<std::string>& b);

std::string default_rules_path();
std::string default_inventory_path();

}  // namespace kovec

#endif  // KOVEC_G2P_HPP_
