// Copyright 2026 The rabicat Authors
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

// CSV tables with a header line and 12-significant-digit values, plus a
// JSON sidecar (<file>.meta.json) describing how the table was produced.

#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rabicat {

/// "%.12g" formatting; -0 is written as 0.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }

  /// Throws std::invalid_argument if the row width does not match.
  void add_row(std::vector<double> values);
  /// Rows with a leading text cell (e.g. an exit channel label).
  void add_row(std::vector<std::string> cells);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `meta` to "<table path>.meta.json" with a stable key order.
void write_metadata(const std::filesystem::path& table_path, const nlohmann::json& meta);

std::filesystem::path metadata_path(const std::filesystem::path& table_path);

}  // namespace rabicat
