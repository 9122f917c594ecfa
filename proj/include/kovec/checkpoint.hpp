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

#ifndef KOVEC_CHECKPOINT_HPP_
#define KOVEC_CHECKPOINT_HPP_

#include <map>
#include <string>
#include <vector>

#include "kovec/autodiff.hpp"

namespace kovec {

// Binary checkpoint: one version byte, then a header listing
// (name, dtype, shape) per parameter, then the raw little-endian float32
// arrays in header order (row-major).
void save_checkpoint(const std::string& path, const ParamSet<float>& params);

// Loads values into an already-constructed parameter set. Every stored name
// must exist with a matching shape (DimMismatch otherwise); stored names
// missing from `params` are a ParseError.
void load_checkpoint(const std::string& path, ParamSet<float>& params);

// Plain-text key=value files used for config snapshots next to checkpoints.
void save_kv(const std::string& path,
             const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> load_kv(const std::string& path);

}  // namespace kovec

#endif  // KOVEC_CHECKPOINT_HPP_
