// Copyright 2026 The faitheval Authors.
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

// Minimal UTF-8 and character-class support. All text offsets in the toolkit
// count Unicode code points, not bytes.

#ifndef FAITHEVAL_UNICODE_H_
#define FAITHEVAL_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace faitheval::unicode {

// Malformed bytes decode to U+FFFD, one per offending byte.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view text);
void AppendUtf8(char32_t cp, std::string& out);

std::size_t CodepointLength(std::string_view utf8);

// General category P* or S*.
bool IsPunctuation(char32_t cp);
// Unicode White_Space.
bool IsWhitespace(char32_t cp);
// Simple (single code point) lowercase mapping.
char32_t ToLower(char32_t cp);

std::string Lowercase(std::string_view utf8);

}  // namespace faitheval::unicode

#endif  // FAITHEVAL_UNICODE_H_
