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

#include "faitheval/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "faitheval/error.h"

namespace faitheval::io {
namespace {

std::string Where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<std::size_t> Table::Column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::RequireColumn(std::string_view name,
                                 std::string_view what) const {
  auto idx = Column(name);
  if (!idx) {
    throw Error(Errc::kSchema, "io",
                std::string(what) + " lacks column '" + std::string(name) + "'");
  }
  return *idx;
}

std::string EscapeField(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeField(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c == '\\' && i + 1 < escaped.size()) {
      char n = escaped[++i];
      switch (n) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case '\\': out.push_back('\\'); break;
        default:
          out.push_back('\\');
          out.push_back(n);
      }
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string JoinTsv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back('\t');
    out += EscapeField(fields[i]);
  }
  return out;
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.emplace_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = nl + 1;
  }
  return lines;
}

std::vector<std::string> Split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

Table ParseTsv(std::string_view text, std::string_view source) {
  Table table;
  auto lines = SplitLines(text);
  if (lines.empty()) {
    throw Error(Errc::kParse, "io", Where(source, 1) + ": missing header row");
  }
  for (auto& h : Split(lines[0], '\t')) table.header.push_back(UnescapeField(h));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    Row row;
    row.line = i + 1;
    for (auto& f : Split(lines[i], '\t')) row.fields.push_back(UnescapeField(f));
    if (row.fields.size() != table.header.size()) {
      throw Error(Errc::kParse, "io",
                  Where(source, row.line) + ": expected " +
                      std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(row.fields.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table ParseCsv(std::string_view text, char delimiter, std::string_view source) {
  std::vector<Row> records;
  Row current;
  std::string field;
  std::size_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool field_started = false;
  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = Row{};
    current.line = line;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(Errc::kParse, "io",
                Where(source, current.line) + ": unterminated quoted field");
  }
  if (field_started || !current.fields.empty()) end_record();

  Table table;
  if (records.empty()) {
    throw Error(Errc::kParse, "io", Where(source, 1) + ": missing header row");
  }
  table.header = std::move(records.front().fields);
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].fields.size() != table.header.size()) {
      throw Error(Errc::kParse, "io",
                  Where(source, records[i].line) + ": expected " +
                      std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(records[i].fields.size()));
    }
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "io", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "io", "cannot write " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(Errc::kIo, "io", "short write to " + path);
}

Table ReadTsv(const std::string& path) { return ParseTsv(ReadFile(path), path); }

std::string FormatFixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // normalizes -0.0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  std::string s(buf);
  // "-0.00" reads badly in tables.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

double ParseDouble(std::string_view text, std::string_view what) {
  std::string_view t = Trim(text);
  double value = 0.0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() ||
      !std::isfinite(value)) {
    throw Error(Errc::kParse, "io",
                "bad number '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

long long ParseInt(std::string_view text, std::string_view what) {
  std::string_view t = Trim(text);
  long long value = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(Errc::kParse, "io",
                "bad integer '" + std::string(text) + "' for " + std::string(what));
  }
  return value;
}

}  // namespace faitheval::io
