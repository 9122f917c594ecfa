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

#include "kovec/runconfig.hpp"

#include "kovec/checkpoint.hpp"
#include "kovec/errors.hpp"

namespace kovec {

void RunConfig::load_file(const std::string& path) {
  for (const auto& [key, value] : load_kv(path)) kv_[key] = value;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

void RunConfig::set_override(const std::string& kv) {
  std::size_t eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like key=value, got: " + kv);
  set(kv.substr(0, eq), kv.substr(eq + 1));
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key); }

std::string RunConfig::get(const std::string& key,
                           const std::string& fallback) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

std::string RunConfig::require(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end())
    throw ConfigError("missing required config key: " + key);
  return it->second;
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " wants an integer, got '" +
                      it->second + "'");
  }
}

float RunConfig::get_float(const std::string& key, float fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stof(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " wants a number, got '" +
                      it->second + "'");
  }
}

std::uint64_t RunConfig::get_u64(const std::string& key,
                                 std::uint64_t fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " wants an integer, got '" +
                      it->second + "'");
  }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config key " + key + " wants true/false, got '" +
                    it->second + "'");
}

void RunConfig::freeze_to(const std::string& path) const {
  save_kv(path, kv_);
}

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  if (value.empty()) return out;
  while (true) {
    std::size_t comma = value.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(value.substr(start));
      return out;
    }
    out.push_back(value.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace kovec
