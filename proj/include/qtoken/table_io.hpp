// Copyright 2026 The qtoken Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTOKEN_TABLE_IO_HPP
#define QTOKEN_TABLE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qtoken {

enum class OutputFormat { kCsv, kJson };

OutputFormat output_format_from_string(const std::string& text);
const char* extension(OutputFormat format) noexcept;

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  /// Index of a column; throws DataError if absent.
  std::size_t column(const std::string& name) const;
};

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

std::string render_csv(const Table& table);
/// {"columns": [...], "rows": [[...], ...]}.
nlohmann::json table_to_json(const Table& table);

/// Writes <dir>/<stem>.csv or <dir>/<stem>.json and returns the path.
std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                  OutputFormat format);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Reads a CSV with a header row into a table of string cells. Throws
/// ParseError on ragged rows.
Table read_csv_file(const std::filesystem::path& path);
/// Numeric value of a cell, parsing strings. Throws DataError.
double cell_as_double(const Cell& cell);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal fixed-size SVG line chart.
std::string render_svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                            const std::vector<PlotSeries>& series);

}  // namespace qtoken

#endif  // QTOKEN_TABLE_IO_HPP
