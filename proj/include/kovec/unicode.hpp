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

#ifndef KOVEC_UNICODE_HPP_
#define KOVEC_UNICODE_HPP_

#include <string>
#include <string_view>

namespace kovec {

// Decodes UTF-8 into code points. Invalid byte sequences decode to U+FFFD,
// one replacement character per offending byte.
std::u32string decode_utf8(std::string_view s);

std::string encode_utf8(char32_t cp);
std::string encode_utf8(std::u32string_view s);

// Number of code points in a UTF-8 string.
std::size_t codepoint_count(std::string_view s);

}  // namespace kovec

#endif  // KOVEC_UNICODE_HPP_
