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

#pragma once

// RFC 4180 style CSV: comma separated, CRLF-free ("\n" line ends), fields
// quoted only when they contain a comma, quote or newline.

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mixent::csv {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);
std::string quote(std::string_view field);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws ContractError if absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> numeric_column(std::string_view name) const;
};

class Writer {
 public:
  Writer(std::ostream& out, std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  std::size_t columns() const { return columns_; }

 private:
  std::ostream& out_;
  std::size_t columns_;
};

Table read(std::istream& in);
Table read_file(const std::string& path);
void write_file(const std::string& path, const Table& table);

}  // namespace mixent::csv
