// Copyright 2026 The Faultwire Authors.
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

#include "faultwire/replay/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "faultwire/core/number_format.hpp"

namespace faultwire::replay {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool blank(std::string_view line, char sep) {
  return std::all_of(line.begin(), line.end(),
                     [sep](char c) { return c == sep || c == ' ' || c == '\t' || c == '\r'; });
}

}  // namespace

DatasetSeries parse_dataset(std::string_view text, const DatasetOptions& options) {
  if (options.decimal_comma && options.separator == ',') {
    throw DatasetError("decimal comma cannot be combined with a comma separator");
  }
  DatasetSeries series;
  series.source_column = options.column;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<std::size_t> column;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (blank(line, options.separator)) continue;

    auto fields = split(line, options.separator);
    if (!column) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (trim(fields[i]) == options.column) {
          column = i;
          break;
        }
      }
      if (!column) throw DatasetError("column '" + options.column + "' not found in header");
      continue;
    }
    if (*column >= fields.size()) {
      throw DatasetError("row " + std::to_string(line_no) + ": missing column '" + options.column + "'");
    }
    std::string cell(trim(fields[*column]));
    if (options.decimal_comma) std::replace(cell.begin(), cell.end(), ',', '.');
    auto value = parse_number(cell);
    if (!value) {
      throw DatasetError("row " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
    }
    if (*value == options.missing_marker) {
      ++series.dropped_rows;
      continue;
    }
    series.values.push_back(*value);
  }
  if (!column) throw DatasetError("dataset is empty");
  if (series.values.empty()) throw DatasetError("dataset has no usable rows");
  return series;
}

DatasetSeries load_dataset(const std::filesystem::path& path, const DatasetOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset(buf.str(), options);
  } catch (const DatasetError& e) {
    throw DatasetError(path.string() + ": " + e.what());
  }
}

}  // namespace faultwire::replay
