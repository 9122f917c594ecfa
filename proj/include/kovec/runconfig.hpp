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

#ifndef KOVEC_RUNCONFIG_HPP_
#define KOVEC_RUNCONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kovec {

// Layered key=value settings: code defaults, then a config file, then
// command-line overrides. The effective merge is what run directories
// freeze, so a frozen config reproduces the run byte-for-byte.
class RunConfig {
 public:
  RunConfig() = default;

  void load_file(const std::string& path);          // file layer
  void set(const std::string& key, const std::string& value);
  void set_override(const std::string& kv);         // "key=value" form

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  std::string require(const std::string& key) const;  // ConfigError if absent
  int get_int(const std::string& key, int fallback) const;
  float get_float(const std::string& key, float fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }
  void freeze_to(const std::string& path) const;

 private:
  std::map<std::string, std::string> kv_;
};

// "a,b,c" -> {a, b, c}; empty input -> {}.
std::vector<std::string> split_csv(const std::string& value);

}  // namespace kovec

#endif  // KOVEC_RUNCONFIG_HPP_
