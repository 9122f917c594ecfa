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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "kovec/errors.hpp"
#include "kovec/hangul.hpp"
#include "kovec/unicode.hpp"

using namespace kovec;

namespace {

std::vector<std::string> symbols_of(const JamoSequence& seq) {
  std::vector<std::string> out;
  for (const Jamo& j : seq.jamos) out.push_back(encode_utf8(j.symbol));
  return out;
}

}  // namespace

TEST_CASE("base syllable decomposes to zero indices") {
  SyllableJamos parts = decompose_syllable(U'가');
  CHECK(parts.lead.index == 0);
  CHECK(parts.vowel.index == 0);
  CHECK(!parts.tail.has_value());
  CHECK(encode_utf8(parts.lead.symbol) == "ㄱ");
  CHECK(encode_utf8(parts.vowel.symbol) == "ㅏ");
}

TEST_CASE("맛 decomposes to ㅁ ㅏ ㅅ") {
  SyllableJamos parts = decompose_syllable(U'맛');
  CHECK(encode_utf8(parts.lead.symbol) == "ㅁ");
  CHECK(encode_utf8(parts.vowel.symbol) == "ㅏ");
  REQUIRE(parts.tail.has_value());
  CHECK(encode_utf8(parts.tail->symbol) == "ㅅ");
  CHECK(compose_syllable(parts.lead, parts.vowel, parts.tail) == U'맛');
}

TEST_CASE("out-of-range code points are rejected") {
  CHECK_THROWS_AS(decompose_syllable(U'a'), NotHangulSyllable);
  CHECK_THROWS_AS(decompose_syllable(U'ㄱ'), NotHangulSyllable);
  CHECK_THROWS_AS(decompose_syllable(char32_t(0xD7A4)), NotHangulSyllable);
}

TEST_CASE("invalid jamo indices are rejected") {
  CHECK_THROWS_AS(compose_syllable(19, 0, 0), InvalidJamo);
  CHECK_THROWS_AS(compose_syllable(0, 21, 0), InvalidJamo);
  CHECK_THROWS_AS(compose_syllable(0, 0, 28), InvalidJamo);
  CHECK_THROWS_AS(compose_syllable(-1, 0, 0), InvalidJamo);
}

TEST_CASE("round-trip over all 11172 syllables") {
  int failures = 0;
  for (char32_t cp = kSyllableBase; cp <= kSyllableLast; ++cp) {
    SyllableJamos parts = decompose_syllable(cp);
    if (compose_syllable(parts.lead, parts.vowel, parts.tail) != cp)
      ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("random index triples survive compose/decompose") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> lead(0, kNumLeads - 1);
  std::uniform_int_distribution<int> vowel(0, kNumVowels - 1);
  std::uniform_int_distribution<int> tail(0, kNumTails - 1);
  for (int i = 0; i < 2000; ++i) {
    int l = lead(rng), v = vowel(rng), t = tail(rng);
    SyllableJamos parts = decompose_syllable(compose_syllable(l, v, t));
    CHECK(parts.lead.index == l);
    CHECK(parts.vowel.index == v);
    CHECK((parts.tail ? parts.tail->index : 0) == t);
  }
}

TEST_CASE("word_to_jamo expands 맛있다 per the expected sequence") {
  JamoSequence seq = word_to_jamo("맛있다");
  std::vector<std::string> want = {"ㅁ", "ㅏ", "ㅅ", "ㅇ",
                                   "ㅣ", "ㅆ", "ㄷ", "ㅏ"};
  CHECK(symbols_of(seq) == want);
  CHECK(compose_word(seq) == "맛있다");
}

TEST_CASE("word_to_jamo on the empty string") {
  JamoSequence seq = word_to_jamo("");
  CHECK(seq.jamos.empty());
  CHECK(compose_word(seq).empty());
}

TEST_CASE("word_to_jamo of 가나 by plain arithmetic") {
  std::vector<std::string> want = {"ㄱ", "ㅏ", "ㄴ", "ㅏ"};
  CHECK(symbols_of(word_to_jamo("가나")) == want);
}

TEST_CASE("non-Hangul characters pass through as opaque tokens") {
  JamoSequence seq = word_to_jamo("a가3");
  REQUIRE(seq.jamos.size() == 4);
  CHECK(seq.jamos[0].kind == JamoKind::kOther);
  CHECK(seq.jamos[0].symbol == U'a');
  CHECK(seq.jamos[1].kind == JamoKind::kLead);
  CHECK(seq.jamos[3].kind == JamoKind::kOther);
  CHECK(compose_word(seq) == "a가3");
}

TEST_CASE("decomposed jamo input is NFC-normalized before expansion") {
  // U+1106 U+1161 U+11BA = conjoining ᄆ + ᅡ + ᆺ
  std::string decomposed = "맛";
  JamoSequence seq = word_to_jamo(decomposed);
  CHECK(seq.source == "맛");
  std::vector<std::string> want = {"ㅁ", "ㅏ", "ㅅ"};
  CHECK(symbols_of(seq) == want);
}

TEST_CASE("round-trip through compose_word on random all-Hangul words") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> lead(0, kNumLeads - 1);
  std::uniform_int_distribution<int> vowel(0, kNumVowels - 1);
  std::uniform_int_distribution<int> tail(0, kNumTails - 1);
  std::uniform_int_distribution<int> len(1, 6);
  for (int i = 0; i < 500; ++i) {
    std::u32string word;
    int n = len(rng);
    for (int k = 0; k < n; ++k)
      word.push_back(compose_syllable(lead(rng), vowel(rng), tail(rng)));
    std::string utf8 = encode_utf8(word);
    JamoSequence seq = word_to_jamo(utf8);
    CHECK(compose_word(seq) == utf8);
    // Never drops characters: at least two jamo per syllable.
    CHECK(seq.jamos.size() >= static_cast<std::size_t>(2 * n));
  }
}

TEST_CASE("determinism: identical input gives identical output") {
  JamoSequence a = word_to_jamo("본격적인");
  JamoSequence b = word_to_jamo("본격적인");
  REQUIRE(a.jamos.size() == b.jamos.size());
  for (std::size_t i = 0; i < a.jamos.size(); ++i)
    CHECK(a.jamos[i] == b.jamos[i]);
}
