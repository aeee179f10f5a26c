// Copyright 2026 The cvdvswap Authors
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

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cvdvswap/experiments.hpp"

namespace cvdvswap {

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

/// Ordered key/value pairs echoed at the top of every emission.
using Metadata = std::vector<std::pair<std::string, std::string>>;

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kCsvHeader =
    "swept_var,value,p_success,stderr,p_analytic,p_lower,p_upper,mean_fidelity,"
    "extra_pair_rate,abandon_rate,trials,seed";

/// CSV: optional "# key: value" metadata lines, the header, one line per row.
/// Floats use 17 significant digits.
void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, const Metadata& metadata = {});

/// JSON: {"metadata": {...}, "rows": [{field: value, ...}, ...]}.
void write_json(std::ostream& out, const std::vector<SweepRow>& rows, const Metadata& metadata = {});
std::vector<SweepRow> read_json_rows(std::istream& in);

/// Writes to `path`; throws IoError naming the path and the cause.
void emit(const std::vector<SweepRow>& rows, Format format, const std::string& path,
          const Metadata& metadata = {});

/// Minimum-squeezing tables: p_target,n_b,sigma_db_min,slope,intercept.
void write_squeezing_csv(std::ostream& out, const std::vector<SqueezingCurve>& curves,
                         const Metadata& metadata = {});

/// `<stem>_<label><ext>` for multi-table presets, e.g. out/fig3.csv + sc2 -> out/fig3_sc2.csv.
std::string series_path(const std::string& path, const std::string& label);

}  // namespace cvdvswap
