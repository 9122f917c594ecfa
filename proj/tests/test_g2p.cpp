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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "golden_g2p.hpp"
#include "kovec/errors.hpp"
#include "kovec/g2p.hpp"
#include "kovec/hangul.hpp"
#include "kovec/unicode.hpp"

using namespace kovec;

namespace {

const RuleTable& table() {
  static RuleTable t =
      RuleTable::load(default_rules_path(), default_inventory_path());
  return t;
}

std::string ipa_of(const std::string& word) {
  PhonemeSequence seq = table().to_ipa(word);
  std::string joined;
  for (std::size_t i = 0; i < seq.phonemes.size(); ++i) {
    if (i) joined += ' ';
    joined += seq.phonemes[i];
  }
  return joined;
}

// Plain full-matrix Levenshtein, kept independent of the two-row
// implementation under test.
int edit_distance_oracle(const std::vector<std::string>& a,
                         const std::vector<std::string>& b) {
  std::vector<std::vector<int>> d(a.size() + 1,
                                  std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j) {
      int best = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      if (d[i - 1][j] + 1 < best) best = d[i - 1][j] + 1;
      if (d[i][j - 1] + 1 < best) best = d[i][j - 1] + 1;
      d[i][j] = best;
    }
  return d[a.size()][b.size()];
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& content) {
  std::filesystem::path p = std::filesystem::temp_directory_path() / name;
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("paper homophones: 맛있다 and 마싯다") {
  CHECK(ipa_of("맛있다") == "m ʌ s i t t' ʌ");
  CHECK(ipa_of("마싯다") == "m ʌ s i t t' ʌ");
  CHECK(pronunciation_distance(table().to_ipa("맛있다"),
                               table().to_ipa("마싯다")) == 0);
}

TEST_CASE("paper homophones: 찾다 and 찼다") {
  CHECK(ipa_of("찾다") == ipa_of("찼다"));
  CHECK(ipa_of("찾다") == "tɕʰ ʌ t t' ʌ");
}

TEST_CASE("golden transcriptions against the shipped table") {
  for (const auto& [word, want] : kovec::testing::golden_transcriptions()) {
    CAPTURE(word);
    CHECK(ipa_of(word) == want);
  }
}

TEST_CASE("every emitted symbol is in the inventory") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<char32_t> syll(kSyllableBase, kSyllableLast);
  std::uniform_int_distribution<int> len(1, 5);
  std::unordered_set<std::string> inv(table().inventory().begin(),
                                      table().inventory().end());
  for (int i = 0; i < 3000; ++i) {
    std::u32string w;
    for (int k = 0, n = len(rng); k < n; ++k) w.push_back(syll(rng));
    PhonemeSequence seq = table().to_ipa(encode_utf8(w));
    CHECK(!seq.phonemes.empty());
    for (const std::string& sym : seq.phonemes) {
      CAPTURE(encode_utf8(w));
      CHECK(inv.count(sym) == 1);
    }
  }
}

TEST_CASE("non-Hangul input yields empty phonemes plus a warning flag") {
  PhonemeSequence seq = table().to_ipa("abc123");
  CHECK(seq.phonemes.empty());
  CHECK(seq.skipped_non_hangul);

  PhonemeSequence mixed = table().to_ipa("맛a있다");
  CHECK(mixed.skipped_non_hangul);
  CHECK(!mixed.phonemes.empty());
}

TEST_CASE("non-Hangul characters break rule context") {
  // The ㅅ coda cannot move across the Latin letter, so it neutralizes at
  // its run end instead.
  CHECK(ipa_of("맛a있다") == "m ʌ t i t t' ʌ");
}

TEST_CASE("pronunciation_distance identity and oracle agreement") {
  PhonemeSequence x = table().to_ipa("맛있다");
  CHECK(pronunciation_distance(x, x) == 0);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 8);
  std::uniform_int_distribution<int> sym(0, 9);
  const std::vector<std::string> alphabet = {"m", "n", "p",  "t",  "k",
                                             "s", "i", "ʌ", "o", "t'"};
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> a, b;
    for (int k = 0, n = len(rng); k < n; ++k) a.push_back(alphabet[sym(rng)]);
    for (int k = 0, n = len(rng); k < n; ++k) b.push_back(alphabet[sym(rng)]);
    CHECK(pronunciation_distance(a, b) == edit_distance_oracle(a, b));
  }
}

TEST_CASE("pronunciation_distance is a metric") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<char32_t> syll(kSyllableBase, kSyllableLast);
  std::uniform_int_distribution<int> len(1, 4);
  auto random_seq = [&]() {
    std::u32string w;
    for (int k = 0, n = len(rng); k < n; ++k) w.push_back(syll(rng));
    return table().to_ipa(encode_utf8(w));
  };
  for (int i = 0; i < 200; ++i) {
    PhonemeSequence a = random_seq(), b = random_seq(), c = random_seq();
    int ab = pronunciation_distance(a, b);
    int ba = pronunciation_distance(b, a);
    int ac = pronunciation_distance(a, c);
    int cb = pronunciation_distance(c, b);
    CHECK(ab == ba);
    CHECK(ab >= 0);
    CHECK((ab == 0) == (a.phonemes == b.phonemes));
    CHECK(ab <= ac + cb);
  }
}

TEST_CASE("determinism of to_ipa") {
  for (const char* w : {"맛있다", "한국어", "없다"}) {
    PhonemeSequence a = table().to_ipa(w);
    PhonemeSequence b = table().to_ipa(w);
    CHECK(a.phonemes == b.phonemes);
  }
}

TEST_CASE("linter rejects overlapping rules in one stage") {
  auto inv = write_temp("kovec_inv_ok.txt", "x\ny\n");
  auto rules = write_temp("kovec_rules_conflict.txt",
                          "1\tone\tt:ㅅㅆ l:ㄷ\tt=ㄷ\n"
                          "1\ttwo\tt:ㅆㅈ l:*\tt=ㄷ\n");
  CHECK_THROWS_AS(RuleTable::load(rules.string(), inv.string()), ParseError);
}

TEST_CASE("loader rejects symbols missing from the inventory") {
  auto inv = write_temp("kovec_inv_small.txt", "m\n");
  auto rules = write_temp("kovec_rules_badsym.txt", "7\tmap\tlead:ㄱ\tzz\n");
  CHECK_THROWS_AS(RuleTable::load(rules.string(), inv.string()), ParseError);
}

TEST_CASE("loader reports malformed lines with their number") {
  auto inv = write_temp("kovec_inv_ok2.txt", "m\n");
  auto rules = write_temp("kovec_rules_bad.txt", "not-a-rule\n");
  try {
    RuleTable::load(rules.string(), inv.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }
}
