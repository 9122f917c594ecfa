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

#include "kovec/tokenize.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "kovec/errors.hpp"
#include "kovec/hangul.hpp"
#include "kovec/unicode.hpp"

namespace kovec {

MorphemeVocab MorphemeVocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open morpheme vocab: " + path);
  std::vector<std::string> toks;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    // Comment lines start with a single #; continuation pieces start with ##.
    if (line[0] == '#' && line.substr(0, 2) != "##") continue;
    toks.push_back(line);
  }
  return from_tokens(toks);
}

MorphemeVocab MorphemeVocab::from_tokens(const std::vector<std::string>& toks) {
  MorphemeVocab vocab;
  for (const std::string& tok : toks) {
    vocab.tokens.insert(tok);
    std::string_view body = tok;
    if (body.substr(0, 2) == "##") body.remove_prefix(2);
    int len = static_cast<int>(codepoint_count(body));
    vocab.max_token_len = std::max(vocab.max_token_len, len);
  }
  return vocab;
}

std::vector<std::string> segment(std::string_view word,
                                 const MorphemeVocab& vocab) {
  std::u32string cps = normalize_hangul_nfc(decode_utf8(word));
  std::vector<std::string> pieces;
  std::size_t i = 0;
  while (i < cps.size()) {
    std::size_t max_len =
        std::min<std::size_t>(vocab.max_token_len, cps.size() - i);
    std::size_t taken = 0;
    for (std::size_t len = max_len; len >= 1; --len) {
      std::string cand = encode_utf8(std::u32string_view(cps).substr(i, len));
      if (i > 0) cand = "##" + cand;
      if (vocab.contains(cand)) {
        pieces.push_back(std::move(cand));
        taken = len;
        break;
      }
    }
    if (taken == 0) {
      // Fallback: single-character piece, so segmentation never fails.
      std::string cand = encode_utf8(cps[i]);
      if (i > 0) cand = "##" + cand;
      pieces.push_back(std::move(cand));
      taken = 1;
    }
    i += taken;
  }
  return pieces;
}

MixedTokenSequence build_mixed_input(std::string_view word,
                                     const MorphemeVocab& vocab) {
  MixedTokenSequence seq;
  JamoSequence jamo = word_to_jamo(word);
  seq.source = jamo.source;
  seq.tokens.reserve(jamo.jamos.size() + 4);
  for (const Jamo& j : jamo.jamos) seq.tokens.push_back(encode_utf8(j.symbol));
  for (std::string& piece : segment(word, vocab))
    seq.tokens.push_back(std::move(piece));
  return seq;
}

SymbolTable::SymbolTable() {
  id_to_symbol_ = {"<pad>", "<unk>"};
  symbol_to_id_ = {{"<pad>", kPadId}, {"<unk>", kUnkId}};
}

int SymbolTable::lookup(const std::string& symbol) const {
  auto it = symbol_to_id_.find(symbol);
  return it == symbol_to_id_.end() ? kUnkId : it->second;
}

std::vector<int> SymbolTable::lookup(
    const std::vector<std::string>& symbols) const {
  std::vector<int> ids;
  ids.reserve(symbols.size());
  for (const std::string& s : symbols) ids.push_back(lookup(s));
  return ids;
}

void SymbolTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write symbol table: " + path);
  for (std::size_t id = 0; id < id_to_symbol_.size(); ++id)
    out << id_to_symbol_[id] << '\t' << id << '\n';
}

SymbolTable SymbolTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open symbol table: " + path);
  SymbolTable table;
  table.id_to_symbol_.clear();
  table.symbol_to_id_.clear();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected `symbol<TAB>id`");
    std::string symbol = line.substr(0, tab);
    int id = 0;
    try {
      id = std::stoi(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad id");
    }
    if (id != static_cast<int>(table.id_to_symbol_.size()))
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": ids must be dense and ascending");
    table.id_to_symbol_.push_back(symbol);
    table.symbol_to_id_[symbol] = id;
  }
  if (table.size() < 2 || table.symbol(kPadId) != "<pad>" ||
      table.symbol(kUnkId) != "<unk>")
    throw ParseError(path + ": missing <pad>/<unk> entries");
  return table;
}

SymbolTable build_symbol_table(
    const std::vector<std::vector<std::string>>& sequences) {
  std::map<std::string, long long> freq;
  for (const auto& seq : sequences)
    for (const std::string& sym : seq) ++freq[sym];

  std::vector<std::pair<std::string, long long>> entries(freq.begin(),
                                                         freq.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  SymbolTable table;
  for (auto& [symbol, count] : entries) {
    if (table.symbol_to_id_.count(symbol)) continue;  // reserved names
    int id = table.size();
    table.id_to_symbol_.push_back(symbol);
    table.symbol_to_id_[symbol] = id;
  }
  return table;
}

std::string default_morpheme_vocab_path() {
  return std::string(KOVEC_DATA_DIR) + "/morpheme_vocab.txt";
}

}  // namespace kovec
