// Copyright 2026 The mixent Authors
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

#include "mixent/common/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mixent/common/error.hpp"

namespace mixent::csv {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ContractError("CSV has no column '" + std::string(name) + "'");
}

std::vector<double> Table::numeric_column(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    try {
      out.push_back(std::stod(r.at(c)));
    } catch (const std::exception&) {
      throw ContractError("CSV column '" + std::string(name) + "' has non-numeric value");
    }
  }
  return out;
}

Writer::Writer(std::ostream& out, std::vector<std::string> header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void Writer::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) {
    throw DimensionError("CSV row has " + std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(columns_));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(fields[i]);
  }
  out_ << '\n';
}

namespace {

// Parses one record starting at `pos`; returns false at end of input.
bool next_record(std::string_view text, std::size_t& pos, std::vector<std::string>& fields) {
  fields.clear();
  if (pos >= text.size()) return false;
  std::string field;
  bool quoted = false;
  while (pos < text.size()) {
    const char c = text[pos++];
    if (quoted) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          field += '"';
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && pos < text.size() && text[pos] == '\n') ++pos;
      break;
    } else {
      field += c;
    }
  }
  if (quoted) throw ContractError("CSV ends inside a quoted field");
  fields.push_back(std::move(field));
  return true;
}

}  // namespace

Table read(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  Table t;
  std::size_t pos = 0;
  std::vector<std::string> fields;
  if (!next_record(text, pos, fields)) throw ContractError("CSV is empty; header row is mandatory");
  t.header = fields;
  while (next_record(text, pos, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != t.header.size()) {
      throw DimensionError("CSV row " + std::to_string(t.rows.size() + 1) + " has " +
                           std::to_string(fields.size()) + " fields, header has " +
                           std::to_string(t.header.size()));
    }
    t.rows.push_back(fields);
  }
  return t;
}

Table read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open " + path);
  return read(in);
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContractError("cannot write " + path);
  Writer w(out, table.header);
  for (const auto& r : table.rows) w.row(r);
}

}  // namespace mixent::csv
