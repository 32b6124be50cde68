// Copyright 2026 The zitter Authors
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

// Minimal CSV for the CLI: unquoted fields, '\n' line ends, locale-free numbers.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace zitter::cli {

/// Shortest general form with 12 significant digits; "nan", "inf", "-inf";
/// negative zero prints as 0.
std::string format_number(double v);

/// Inverse of format_number. Throws InvalidConfig on malformed text.
double parse_number(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable parse_csv(std::string_view text);

}  // namespace zitter::cli
