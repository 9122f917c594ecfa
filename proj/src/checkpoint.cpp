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

#include "kovec/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include "kovec/errors.hpp"

namespace kovec {

namespace {

constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kDtypeF32 = 0;

void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
               static_cast<char>((v >> 16) & 0xFF),
               static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw ParseError("truncated checkpoint: " + path);
  return static_cast<std::uint32_t>(b[0]) |
         static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 |
         static_cast<std::uint32_t>(b[3]) << 24;
}

void write_f32(std::ostream& out, float v) {
  write_u32(out, std::bit_cast<std::uint32_t>(v));
}

float read_f32(std::istream& in, const std::string& path) {
  return std::bit_cast<float>(read_u32(in, path));
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamSet<float>& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.put(static_cast<char>(kVersion));
  write_u32(out, static_cast<std::uint32_t>(params.items().size()));
  for (const auto& p : params.items()) {
    write_u32(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    out.put(static_cast<char>(kDtypeF32));
    write_u32(out, static_cast<std::uint32_t>(p->value.rows()));
    write_u32(out, static_cast<std::uint32_t>(p->value.cols()));
  }
  for (const auto& p : params.items())
    for (Eigen::Index i = 0; i < p->value.size(); ++i)
      write_f32(out, p->value.data()[i]);
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

void load_checkpoint(const std::string& path, ParamSet<float>& params) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open checkpoint: " + path);
  int version = in.get();
  if (version != kVersion)
    throw ParseError("unsupported checkpoint version in " + path);
  std::uint32_t count = read_u32(in, path);
  struct Entry {
    std::string name;
    std::uint32_t rows, cols;
  };
  std::vector<Entry> entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t name_len = read_u32(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    int dtype = in.get();
    if (!in) throw ParseError("truncated checkpoint: " + path);
    if (dtype != kDtypeF32)
      throw ParseError("unsupported dtype for '" + name + "' in " + path);
    std::uint32_t rows = read_u32(in, path);
    std::uint32_t cols = read_u32(in, path);
    entries.push_back({std::move(name), rows, cols});
  }
  for (const Entry& e : entries) {
    if (!params.has(e.name))
      throw ParseError("checkpoint has unknown parameter '" + e.name +
                       "': " + path);
    Parameter<float>& p = params.at(e.name);
    if (p.value.rows() != static_cast<Eigen::Index>(e.rows) ||
        p.value.cols() != static_cast<Eigen::Index>(e.cols))
      throw DimMismatch("parameter '" + e.name + "' is " +
                        shape_str(p.value.rows(), p.value.cols()) +
                        " but checkpoint stores " +
                        shape_str(e.rows, e.cols));
    for (Eigen::Index i = 0; i < p.value.size(); ++i)
      p.value.data()[i] = read_f32(in, path);
  }
}

void save_kv(const std::string& path,
             const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
}

std::map<std::string, std::string> load_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected key = value");
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t");
      std::size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace kovec
