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

#include "kovec/g2p.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kovec/errors.hpp"
#include "kovec/hangul.hpp"
#include "kovec/unicode.hpp"

namespace kovec {

namespace {

constexpr int kEndBit = 19;  // lead_mask bit for "no right syllable"

struct Syl {
  int lead;
  int vowel;
  int tail;  // 0 = none
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

// Parses a jamo set such as "ㅅㅆㅈ", "^ㅇㅎ", "*", "-" (no tail) or "#"
// (word end, leads only) into a bit mask.
std::uint32_t parse_set(const std::string& path, int line, char kind,
                        const std::string& value) {
  int universe = kind == 't' ? kNumTails : (kind == 'l' ? 20 : kNumVowels);
  std::uint32_t all = (1u << universe) - 1;
  if (value == "*") return all;
  bool negate = false;
  std::u32string cps = decode_utf8(value);
  std::size_t i = 0;
  if (!cps.empty() && cps[0] == U'^') {
    negate = true;
    i = 1;
  }
  std::uint32_t mask = 0;
  for (; i < cps.size(); ++i) {
    char32_t c = cps[i];
    int idx = -1;
    if (kind == 't') {
      idx = c == U'-' ? 0 : tail_index(c);
    } else if (kind == 'l') {
      idx = c == U'#' ? kEndBit : lead_index(c);
    } else {
      idx = vowel_index(c);
    }
    if (idx < 0)
      fail(path, line, std::string("bad jamo in ") + kind + "-set: " +
                           encode_utf8(c));
    mask |= 1u << idx;
  }
  if (mask == 0) fail(path, line, "empty jamo set");
  return negate ? (all & ~mask) : mask;
}

int parse_jamo_value(const std::string& path, int line, char slot,
                     const std::string& tok) {
  std::u32string cps = decode_utf8(tok);
  if (cps.size() != 1) fail(path, line, "bad rewrite value: " + tok);
  char32_t c = cps[0];
  int idx = -1;
  if (slot == 't') {
    idx = c == U'0' ? 0 : tail_index(c);
  } else if (slot == 'l') {
    idx = lead_index(c);
  } else {
    idx = vowel_index(c);
  }
  if (idx < 0)
    fail(path, line, std::string("rewrite jamo not valid for slot ") + slot +
                         ": " + tok);
  return idx;
}

// True when two rules can fire on one and the same context.
bool rules_overlap(const PhonRule& a, const PhonRule& b) {
  if ((a.tail_mask & b.tail_mask) == 0) return false;
  std::uint32_t leads = a.lead_mask & b.lead_mask;
  if (leads & (1u << kEndBit)) return true;
  if ((leads & ~(1u << kEndBit)) == 0) return false;
  return (a.vowel_mask & b.vowel_mask) != 0;
}

}  // namespace

RuleTable RuleTable::load(const std::string& rules_path,
                          const std::string& inventory_path) {
  RuleTable table;
  table.lead_ipa_.resize(kNumLeads);
  table.vowel_ipa_.resize(kNumVowels);
  table.tail_ipa_.resize(kNumTails);

  std::ifstream inv(inventory_path);
  if (!inv) throw ParseError("cannot open IPA inventory: " + inventory_path);
  std::string line;
  while (std::getline(inv, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (table.inventory_set_.insert(line).second)
      table.inventory_.push_back(line);
  }
  if (table.inventory_.empty())
    throw ParseError("IPA inventory is empty: " + inventory_path);

  std::ifstream in(rules_path);
  if (!in) throw ParseError("cannot open rule table: " + rules_path);
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 4)
      fail(rules_path, line_no, "expected 4 tab-separated fields");
    int stage = 0;
    try {
      stage = std::stoi(fields[0]);
    } catch (const std::exception&) {
      fail(rules_path, line_no, "bad stage: " + fields[0]);
    }
    const std::string& name = fields[1];

    if (stage == 7) {
      // Mapping rule: pattern is `lead:X`, `vowel:X` or `tail:X`; rewrite is
      // a space-joined symbol list, `-` for none.
      std::size_t colon = fields[2].find(':');
      if (colon == std::string::npos)
        fail(rules_path, line_no, "bad map pattern: " + fields[2]);
      std::string pos = fields[2].substr(0, colon);
      std::u32string cps = decode_utf8(fields[2].substr(colon + 1));
      if (cps.size() != 1) fail(rules_path, line_no, "map pattern wants one jamo");
      std::vector<std::string> symbols;
      if (fields[3] != "-") symbols = split_ws(fields[3]);
      for (const std::string& sym : symbols) {
        if (!table.inventory_set_.count(sym))
          fail(rules_path, line_no, "symbol not in inventory: " + sym);
      }
      std::optional<std::vector<std::string>>* slot = nullptr;
      if (pos == "lead") {
        int idx = lead_index(cps[0]);
        if (idx < 0) fail(rules_path, line_no, "not a lead jamo");
        slot = &table.lead_ipa_[idx];
      } else if (pos == "vowel") {
        int idx = vowel_index(cps[0]);
        if (idx < 0) fail(rules_path, line_no, "not a vowel jamo");
        slot = &table.vowel_ipa_[idx];
      } else if (pos == "tail") {
        int idx = tail_index(cps[0]);
        if (idx < 0) fail(rules_path, line_no, "not a tail jamo");
        slot = &table.tail_ipa_[idx];
      } else {
        fail(rules_path, line_no, "bad map position: " + pos);
      }
      if (slot->has_value())
        fail(rules_path, line_no, "duplicate mapping (" + name + ")");
      *slot = std::move(symbols);
      continue;
    }

    if (stage < 1 || stage > 6)
      fail(rules_path, line_no, "stage must be 1..6 or 7 (map)");
    PhonRule rule;
    rule.stage = stage;
    rule.name = name;
    rule.line = line_no;
    rule.tail_mask = (1u << kNumTails) - 1;
    rule.lead_mask = (1u << 20) - 1;
    rule.vowel_mask = (1u << kNumVowels) - 1;
    for (const std::string& cond : split_ws(fields[2])) {
      if (cond.size() < 3 || cond[1] != ':')
        fail(rules_path, line_no, "bad condition: " + cond);
      char key = cond[0];
      std::string value = cond.substr(2);
      if (key == 't')
        rule.tail_mask = parse_set(rules_path, line_no, 't', value);
      else if (key == 'l')
        rule.lead_mask = parse_set(rules_path, line_no, 'l', value);
      else if (key == 'v')
        rule.vowel_mask = parse_set(rules_path, line_no, 'v', value);
      else
        fail(rules_path, line_no, std::string("bad condition key: ") + key);
    }
    for (const std::string& act : split_ws(fields[3])) {
      std::size_t eq = act.find('=');
      if (eq != 1 || act.size() < 3)
        fail(rules_path, line_no, "bad rewrite: " + act);
      char slot = act[0];
      std::string value = act.substr(2);
      if (slot == 'l' && value == "$t") {
        rule.lead_from_tail = true;
        continue;
      }
      int idx = parse_jamo_value(rules_path, line_no, slot, value);
      if (slot == 't')
        rule.set_tail = idx;
      else if (slot == 'l')
        rule.set_lead = idx;
      else if (slot == 'v')
        rule.set_vowel = idx;
      else
        fail(rules_path, line_no, std::string("bad rewrite slot: ") + slot);
    }
    if (!rule.set_tail && !rule.set_lead && !rule.set_vowel &&
        !rule.lead_from_tail)
      fail(rules_path, line_no, "rule rewrites nothing");
    if ((rule.lead_mask & (1u << kEndBit)) &&
        (rule.set_lead || rule.set_vowel || rule.lead_from_tail))
      fail(rules_path, line_no,
           "rule matching word end may only rewrite the tail");
    if (rule.lead_from_tail) {
      for (int t = 1; t < kNumTails; ++t) {
        if ((rule.tail_mask & (1u << t)) && lead_index(tail_symbol(t)) < 0)
          fail(rules_path, line_no,
               "l=$t used with a tail that is not a lead: " +
                   encode_utf8(tail_symbol(t)));
      }
    }
    table.rules_.push_back(std::move(rule));
  }
  table.lint();
  return table;
}

void RuleTable::lint() const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    for (std::size_t j = i + 1; j < rules_.size(); ++j) {
      if (rules_[i].stage != rules_[j].stage) continue;
      if (rules_overlap(rules_[i], rules_[j]))
        throw ParseError("rule table conflict in stage " +
                         std::to_string(rules_[i].stage) + ": '" +
                         rules_[i].name + "' (line " +
                         std::to_string(rules_[i].line) + ") overlaps '" +
                         rules_[j].name + "' (line " +
                         std::to_string(rules_[j].line) + ")");
    }
  }
}

PhonemeSequence RuleTable::to_ipa(std::string_view word) const {
  PhonemeSequence out;
  std::u32string cps = normalize_hangul_nfc(decode_utf8(word));
  out.source = encode_utf8(cps);

  // Non-Hangul characters contribute no phonemes and break rule context:
  // rules never apply across them.
  std::vector<std::vector<Syl>> runs;
  std::vector<Syl> run;
  for (char32_t cp : cps) {
    if (is_hangul_syllable(cp)) {
      int offset = static_cast<int>(cp - kSyllableBase);
      run.push_back(Syl{offset / (kNumVowels * kNumTails),
                        (offset / kNumTails) % kNumVowels,
                        offset % kNumTails});
    } else {
      out.skipped_non_hangul = true;
      if (!run.empty()) runs.push_back(std::move(run));
      run.clear();
    }
  }
  if (!run.empty()) runs.push_back(std::move(run));

  for (std::vector<Syl>& syls : runs) {
    for (int stage = 1; stage <= 6; ++stage) {
      for (std::size_t i = 0; i < syls.size(); ++i) {
        Syl& left = syls[i];
        Syl* right = i + 1 < syls.size() ? &syls[i + 1] : nullptr;
        for (const PhonRule& rule : rules_) {
          if (rule.stage != stage) continue;
          if (!(rule.tail_mask & (1u << left.tail))) continue;
          if (right == nullptr) {
            if (!(rule.lead_mask & (1u << kEndBit))) continue;
          } else {
            if (!(rule.lead_mask & (1u << right->lead))) continue;
            if (!(rule.vowel_mask & (1u << right->vowel))) continue;
          }
          // The linter guarantees at most one rule matches per stage.
          if (rule.lead_from_tail)
            right->lead = lead_index(tail_symbol(left.tail));
          if (rule.set_lead) right->lead = *rule.set_lead;
          if (rule.set_vowel) right->vowel = *rule.set_vowel;
          if (rule.set_tail) left.tail = *rule.set_tail;
          break;
        }
      }
    }
    for (const Syl& s : syls) {
      if (!lead_ipa_[s.lead])
        throw DataError("rule table has no IPA mapping for lead " +
                        encode_utf8(lead_symbol(s.lead)));
      if (!vowel_ipa_[s.vowel])
        throw DataError("rule table has no IPA mapping for vowel " +
                        encode_utf8(vowel_symbol(s.vowel)));
      for (const std::string& sym : *lead_ipa_[s.lead]) out.phonemes.push_back(sym);
      for (const std::string& sym : *vowel_ipa_[s.vowel]) out.phonemes.push_back(sym);
      if (s.tail != 0) {
        if (!tail_ipa_[s.tail])
          throw DataError("rule table has no IPA mapping for tail " +
                          encode_utf8(tail_symbol(s.tail)));
        for (const std::string& sym : *tail_ipa_[s.tail]) out.phonemes.push_back(sym);
      }
    }
  }
  return out;
}

int pronunciation_distance(const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<int> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

int pronunciation_distance(const PhonemeSequence& a, const PhonemeSequence& b) {
  return pronunciation_distance(a.phonemes, b.phonemes);
}

std::string default_rules_path() {
  return std::string(KOVEC_DATA_DIR) + "/g2p_rules.txt";
}

std::string default_inventory_path() {
  return std::string(KOVEC_DATA_DIR) + "/ipa_inventory.txt";
}

}  // namespace kovec
