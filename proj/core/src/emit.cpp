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

#include "cvdvswap/emit.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "cvdvswap/errors.hpp"
#include <nlohmann/json.hpp>

namespace cvdvswap {
namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_metadata_comments(std::ostream& out, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::out | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  return file;
}

void finish(std::ofstream& file, const std::string& path) {
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed: " + std::strerror(errno));
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv" || name == "CSV") return Format::Csv;
  if (name == "json" || name == "JSON") return Format::Json;
  throw InvalidParameter("unknown format '" + name + "' (expected csv or json)");
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows, const Metadata& metadata) {
  write_metadata_comments(out, metadata);
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.swept_var << ',' << g17(r.value) << ',' << g17(r.p_success) << ',' << g17(r.stderr_)
        << ',' << g17(r.p_analytic) << ',' << g17(r.p_lower) << ',' << g17(r.p_upper) << ','
        << g17(r.mean_fidelity) << ',' << g17(r.extra_pair_rate) << ',' << g17(r.abandon_rate)
        << ',' << r.trials << ',' << r.seed << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows, const Metadata& metadata) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : metadata) doc["metadata"][key] = value;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"swept_var", r.swept_var},
                           {"value", r.value},
                           {"p_success", r.p_success},
                           {"stderr", r.stderr_},
                           {"p_analytic", r.p_analytic},
                           {"p_lower", r.p_lower},
                           {"p_upper", r.p_upper},
                           {"mean_fidelity", r.mean_fidelity},
                           {"extra_pair_rate", r.extra_pair_rate},
                           {"abandon_rate", r.abandon_rate},
                           {"trials", r.trials},
                           {"seed", r.seed}});
  }
  out << doc.dump(2) << '\n';
}

std::vector<SweepRow> read_json_rows(std::istream& in) {
  const auto doc = nlohmann::json::parse(in);
  std::vector<SweepRow> rows;
  for (const auto& j : doc.at("rows")) {
    SweepRow r;
    r.swept_var = j.at("swept_var").get<std::string>();
    r.value = j.at("value").get<double>();
    r.p_success = j.at("p_success").get<double>();
    r.stderr_ = j.at("stderr").get<double>();
    r.p_analytic = j.at("p_analytic").get<double>();
    r.p_lower = j.at("p_lower").get<double>();
    r.p_upper = j.at("p_upper").get<double>();
    r.mean_fidelity = j.at("mean_fidelity").get<double>();
    r.extra_pair_rate = j.at("extra_pair_rate").get<double>();
    r.abandon_rate = j.at("abandon_rate").get<double>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit(const std::vector<SweepRow>& rows, Format format, const std::string& path,
          const Metadata& metadata) {
  auto file = open_output(path);
  if (format == Format::Csv) {
    write_csv(file, rows, metadata);
  } else {
    write_json(file, rows, metadata);
  }
  finish(file, path);
}

void write_squeezing_csv(std::ostream& out, const std::vector<SqueezingCurve>& curves,
                         const Metadata& metadata) {
  write_metadata_comments(out, metadata);
  out << "p_target,n_b,sigma_db_min,slope,intercept\n";
  for (const auto& c : curves) {
    for (std::size_t i = 0; i < c.n_b.size(); ++i) {
      out << g17(c.p_target) << ',' << c.n_b[i] << ',' << g17(c.sigma_db[i]) << ','
          << g17(c.fit.slope) << ',' << g17(c.fit.intercept) << '\n';
    }
  }
}

std::string series_path(const std::string& path, const std::string& label) {
  const std::filesystem::path p(path);
  auto name = p.stem().string() + "_" + label + p.extension().string();
  return (p.parent_path() / name).string();
}

}  // namespace cvdvswap
