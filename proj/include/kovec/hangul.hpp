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

#ifndef KOVEC_HANGUL_HPP_
#define KOVEC_HANGUL_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kovec {

inline constexpr char32_t kSyllableBase = U'가';  // 가
inline constexpr char32_t kSyllableLast = U'힣';  // 힣
inline constexpr int kNumLeads = 19;
inline constexpr int kNumVowels = 21;
inline constexpr int kNumTails = 28;  // index 0 = no tail

enum class JamoKind { kLead, kVowel, kTail, kOther };

// One subcharacter. Hangul jamo carry their index within the lead/vowel/tail
// inventory and the compatibility-jamo code point (U+3131..U+3163) used as the
// canonical surface symbol. Non-Hangul characters pass through as kOther with
// index -1 and symbol = original code point.
struct Jamo {
  JamoKind kind;
  int index;
  char32_t symbol;

  bool operator==(const Jamo&) const = default;
};

struct JamoSequence {
  std::vector<Jamo> jamos;
  // NFC-normalized form of the input word; composing the sequence
  // syllable-by-syllable reproduces this exactly for all-Hangul input.
  std::string source;
};

bool is_hangul_syllable(char32_t cp);

// Surface symbol lookups. Index must be in range for the kind
// (tail index 0, the empty tail, has no symbol and is rejected).
char32_t lead_symbol(int index);
char32_t vowel_symbol(int index);
char32_t tail_symbol(int index);

// Reverse lookups from a compatibility-jamo code point; -1 when the symbol
// does not belong to the inventory of that kind.
int lead_index(char32_t symbol);
int vowel_index(char32_t symbol);
int tail_index(char32_t symbol);

struct SyllableJamos {
  Jamo lead;
  Jamo vowel;
  std::optional<Jamo> tail;
};

// Splits one precomposed syllable into jamo. Throws NotHangulSyllable when
// cp is outside U+AC00..U+D7A3.
SyllableJamos decompose_syllable(char32_t cp);

// Inverse of decompose_syllable. Throws InvalidJamo on out-of-range indices
// or mismatched kinds. tail index 0 is equivalent to passing no tail.
char32_t compose_syllable(const Jamo& lead, const Jamo& vowel,
                          const std::optional<Jamo>& tail = std::nullopt);
char32_t compose_syllable(int lead, int vowel, int tail);

// NFC normalization restricted to Hangul: conjoining-jamo sequences
// (U+1100 block) and syllable+trailing-jamo pairs compose into precomposed
// syllables; everything else is left untouched.
std::u32string normalize_hangul_nfc(std::u32string_view s);

// Expands every Hangul syllable in the word into its jamo, in order.
// Non-Hangul code points become opaque kOther entries. Total function.
JamoSequence word_to_jamo(std::string_view word);

// Recomposes a jamo sequence into a string using the kind tags.
// Throws InvalidJamo if the sequence is not well-formed (for example a lead
// with no following vowel).
std::string compose_word(const JamoSequence& seq);

}  // namespace kovec

#endif  // KOVEC_HANGUL_HPP_
