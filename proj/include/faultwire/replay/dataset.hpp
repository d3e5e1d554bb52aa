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

#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace faultwire::replay {

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetOptions {
  std::string column = "NOx(GT)";
  char separator = ';';
  bool decimal_comma = true;
  double missing_marker = -200;
};

struct DatasetSeries {
  std::vector<double> values;
  std::string source_column;
  std::size_t dropped_rows = 0;
};

/// Parses one column of a delimited file with a header line. Rows holding the
/// missing marker are skipped and counted; blank lines are ignored.
DatasetSeries parse_dataset(std::string_view text, const DatasetOptions& options = {});
DatasetSeries load_dataset(const std::filesystem::path& path, const DatasetOptions& options = {});

}  // namespace faultwire::replay
