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

// Delimited-text helpers shared by every file format in the toolkit.
//
// TSV fields use backslash escapes (\\, \t, \n, \r) so that document text can
// round-trip through a single line. CSV input follows RFC 4180 quoting.

#ifndef FAITHEVAL_IO_H_
#define FAITHEVAL_IO_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace faitheval::io {

struct Row {
  std::size_t line = 0;  // 1-based line number in the source file
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Index of a header column, or nullopt.
  std::optional<std::size_t> Column(std::string_view name) const;
  // Same, but throws SchemaError naming `what` when absent.
  std::size_t RequireColumn(std::string_view name, std::string_view what) const;
};

std::string EscapeField(std::string_view raw);
std::string UnescapeField(std::string_view escaped);

std::string JoinTsv(const std::vector<std::string>& fields);

// Parses TSV text whose first line is a header. Every row must have exactly
// as many fields as the header. `source` names the input in error messages.
Table ParseTsv(std::string_view text, std::string_view source);
// RFC 4180 CSV (quoted fields may contain delimiters and newlines).
Table ParseCsv(std::string_view text, char delimiter, std::string_view source);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

Table ReadTsv(const std::string& path);

// Lines without their terminators; a trailing empty line is dropped.
std::vector<std::string> SplitLines(std::string_view text);
std::vector<std::string> Split(std::string_view text, char sep);

// Fixed-point rendering, e.g. FormatFixed(38.4249, 2) == "38.42".
std::string FormatFixed(double value, int decimals);

double ParseDouble(std::string_view text, std::string_view what);
long long ParseInt(std::string_view text, std::string_view what);

}  // namespace faitheval::io

#endif  // FAITHEVAL_IO_H_
