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

#include "kovec/hangul.hpp"

#include "kovec/errors.hpp"
#include "kovec/unicode.hpp"

namespace kovec {

namespace {

// Compatibility jamo (U+3131 block) in canonical inventory order.
constexpr char32_t kLeadSymbols[kNumLeads] = {
    U'ㄱ', U'ㄲ', U'ㄴ', U'ㄷ', U'ㄸ', U'ㄹ', U'ㅁ', U'ㅂ', U'ㅃ', U'ㅅ',
    U'ㅆ', U'ㅇ', U'ㅈ', U'ㅉ', U'ㅊ', U'ㅋ', U'ㅌ', U'ㅍ', U'ㅎ'};

constexpr char32_t kTailSymbols[kNumTails] = {
    0,      U'ㄱ', U'ㄲ', U'ㄳ', U'ㄴ', U'ㄵ', U'ㄶ', U'ㄷ', U'ㄹ', U'ㄺ',
    U'ㄻ', U'ㄼ', U'ㄽ', U'ㄾ', U'ㄿ', U'ㅀ', U'ㅁ', U'ㅂ', U'ㅄ', U'ㅅ',
    U'ㅆ', U'ㅇ', U'ㅈ', U'ㅊ', U'ㅋ', U'ㅌ', U'ㅍ', U'ㅎ'};

constexpr char32_t kVowelBase = U'ㅏ';  // U+314F; the 21 vowels are contiguous

// Conjoining jamo ranges used by the NFC pass.
constexpr char32_t kChoseongBase = U'ᄀ';
constexpr char32_t kJungseongBase = U'ᅡ';
constexpr char32_t kJongseongBase = U'ᆧ';  // tail index 1 = U+11A8

bool is_choseong(char32_t cp) { return cp >= 0x1100 && cp <= 0x1112; }
bool is_jungseong(char32_t cp) { return cp >= 0x1161 && cp <= 0x1175; }
bool is_jongseong(char32_t cp) { return cp >= 0x11A8 && cp <= 0x11C2; }

}  // namespace

bool is_hangul_syllable(char32_t cp) {
  return cp >= kSyllableBase && cp <= kSyllableLast;
}

char32_t lead_symbol(int index) {
  if (index < 0 || index >= kNumLeads)
    throw InvalidJamo("lead index out of range: " + std::to_string(index));
  return kLeadSymbols[index];
}

char32_t vowel_symbol(int index) {
  if (index < 0 || index >= kNumVowels)
    throw InvalidJamo("vowel index out of range: " + std::to_string(index));
  return kVowelBase + static_cast<char32_t>(index);
}

char32_t tail_symbol(int index) {
  if (index <= 0 || index >= kNumTails)
    throw InvalidJamo("tail index out of range: " + std::to_string(index));
  return kTailSymbols[index];
}

int lead_index(char32_t symbol) {
  for (int i = 0; i < kNumLeads; ++i)
    if (kLeadSymbols[i] == symbol) return i;
  return -1;
}

int vowel_index(char32_t symbol) {
  if (symbol >= kVowelBase && symbol < kVowelBase + kNumVowels)
    return static_cast<int>(symbol - kVowelBase);
  return -1;
}

int tail_index(char32_t symbol) {
  for (int i = 1; i < kNumTails; ++i)
    if (kTailSymbols[i] == symbol) return i;
  return -1;
}

SyllableJamos decompose_syllable(char32_t cp) {
  if (!is_hangul_syllable(cp))
    throw NotHangulSyllable("code point U+" + std::to_string(cp) +
                            " is not a precomposed Hangul syllable");
  int offset = static_cast<int>(cp - kSyllableBase);
  int lead = offset / (kNumVowels * kNumTails);
  int vowel = (offset / kNumTails) % kNumVowels;
  int tail = offset % kNumTails;
  SyllableJamos out;
  out.lead = Jamo{JamoKind::kLead, lead, kLeadSymbols[lead]};
  out.vowel = Jamo{JamoKind::kVowel, vowel, vowel_symbol(vowel)};
  if (tail != 0) out.tail = Jamo{JamoKind::kTail, tail, kTailSymbols[tail]};
  return out;
}

char32_t compose_syllable(int lead, int vowel, int tail) {
  if (lead < 0 || lead >= kNumLeads || vowel < 0 || vowel >= kNumVowels ||
      tail < 0 || tail >= kNumTails)
    throw InvalidJamo("invalid jamo indices (" + std::to_string(lead) + ", " +
                      std::to_string(vowel) + ", " + std::to_string(tail) +
                      ")");
  return kSyllableBase +
         static_cast<char32_t>((lead * kNumVowels + vowel) * kNumTails + tail);
}

char32_t compose_syllable(const Jamo& lead, const Jamo& vowel,
                          const std::optional<Jamo>& tail) {
  if (lead.kind != JamoKind::kLead || vowel.kind != JamoKind::kVowel ||
      (tail && tail->kind != JamoKind::kTail))
    throw InvalidJamo("jamo kinds do not form a syllable");
  return compose_syllable(lead.index, vowel.index, tail ? tail->index : 0);
}

std::u32string normalize_hangul_nfc(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t c = s[i];
    if (is_choseong(c) && i + 1 < s.size() && is_jungseong(s[i + 1])) {
      int lead = static_cast<int>(c - kChoseongBase);
      int vowel = static_cast<int>(s[i + 1] - kJungseongBase);
      int tail = 0;
      std::size_t next = i + 2;
      if (next < s.size() && is_jongseong(s[next])) {
        tail = static_cast<int>(s[next] - kJongseongBase);
        ++next;
      }
      out.push_back(compose_syllable(lead, vowel, tail));
      i = next;
      continue;
    }
    if (is_hangul_syllable(c) && (c - kSyllableBase) % kNumTails == 0 &&
        i + 1 < s.size() && is_jongseong(s[i + 1])) {
      int tail = static_cast<int>(s[i + 1] - kJongseongBase);
      out.push_back(c + static_cast<char32_t>(tail));
      i += 2;
      continue;
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

JamoSequence word_to_jamo(std::string_view word) {
  std::u32string cps = normalize_hangul_nfc(decode_utf8(word));
  JamoSequence seq;
  seq.source = encode_utf8(cps);
  seq.jamos.reserve(cps.size() * 3);
  for (char32_t cp : cps) {
    if (is_hangul_syllable(cp)) {
      SyllableJamos parts = decompose_syllable(cp);
      seq.jamos.push_back(parts.lead);
      seq.jamos.push_back(parts.vowel);
      if (parts.tail) seq.jamos.push_back(*parts.tail);
    } else {
      seq.jamos.push_back(Jamo{JamoKind::kOther, -1, cp});
    }
  }
  return seq;
}

std::string compose_word(const JamoSequence& seq) {
  std::u32string out;
  std::size_t i = 0;
  const auto& jamos = seq.jamos;
  while (i < jamos.size()) {
    const Jamo& j = jamos[i];
    if (j.kind == JamoKind::kOther) {
      out.push_back(j.symbol);
      ++i;
      continue;
    }
    if (j.kind != JamoKind::kLead || i + 1 >= jamos.size() ||
        jamos[i + 1].kind != JamoKind::kVowel)
      throw InvalidJamo("jamo sequence does not form syllables at position " +
                        std::to_string(i));
    std::optional<Jamo> tail;
    std::size_t next = i + 2;
    if (next < jamos.size() && jamos[next].kind == JamoKind::kTail) {
      tail = jamos[next];
      ++next;
    }
    out.push_back(compose_syllable(j, jamos[i + 1], tail));
    i = next;
  }
  return encode_utf8(out);
}

}  // namespace kovec
