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

#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "cvdvswap/analytic.hpp"
#include "cvdvswap/emit.hpp"
#include "cvdvswap/errors.hpp"
#include "cvdvswap/experiments.hpp"
#include "cvdvswap/gaussian_modes.hpp"
#include "cvdvswap/protocol.hpp"
#include "cvdvswap/transcript.hpp"
#include "verify.hpp"

#ifndef CVDVSWAP_VERSION
#define CVDVSWAP_VERSION "unknown"
#endif

namespace cvdvswap::cli {
namespace {

struct SigmaFlags {
  double db = 15.0;
  std::optional<double> linear;

  double value() const { return linear ? *linear : sigma_from_db(db); }
  double value_db() const { return linear ? db_from_sigma(*linear) : db; }

  void add_to(CLI::App& app) {
    auto* db_opt = app.add_option("--sigma-db", db, "Squeezing in dB")->capture_default_str();
    auto* lin_opt = app.add_option("--sigma-linear", linear, "Squeezing as linear sigma");
    db_opt->excludes(lin_opt);
  }
};

struct TrialFlags {
  int n = 2;
  SigmaFlags sigma;
  int s_c = 0;
  double threshold = 0.99;
  std::uint64_t seed = 1;
  std::string transcript;
};

struct SweepFlags {
  std::string preset;
  std::string variable = "sigma_db";
  std::string grid;
  int n = 2;
  SigmaFlags sigma;
  int s_c = 0;
  double threshold = 0.99;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string output;
  std::string format;
  unsigned threads = 1;
  double cutoff = analytic::kFitCutoff;
};

struct AnalyticFlags {
  SigmaFlags sigma;
  int n_b = 1;
  int n = 2;
  int s_c = 0;
  double c = analytic::kDesignCutoff;
  double p_target = 0.0;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_header(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

Metadata base_metadata(const std::string& command) {
  return {{"cvdvswap_version", CVDVSWAP_VERSION}, {"command", command}};
}

std::uint64_t parse_seed_env() {
  const char* raw = std::getenv(kSeedEnv);
  if (raw == nullptr || *raw == '\0') return 1;
  std::uint64_t value = 0;
  const std::string text(raw);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidParameter(std::string(kSeedEnv) + " is not an unsigned integer: '" + text + "'");
  }
  return value;
}

// "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  auto to_double = [&](const std::string& token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) throw InvalidParameter("bad grid value '" + token + "' in '" + text + "'");
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ':')) parts.push_back(to_double(token));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw InvalidParameter("grid range must be start:stop:step with step > 0 and stop >= start, got '" + text + "'");
    }
    const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long i = 0; i <= count; ++i) grid.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  } else {
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) grid.push_back(to_double(token));
  }
  if (grid.empty()) throw InvalidParameter("empty grid");
  return grid;
}

Format resolve_format(const SweepFlags& f) {
  if (!f.format.empty()) return parse_format(f.format);
  const auto& path = f.output;
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) return Format::Json;
  return Format::Csv;
}

int cmd_trial(const TrialFlags& f, std::ostream& out) {
  ProtocolConfig config;
  config.n = f.n;
  config.sigma = f.sigma.value();
  config.s_c = f.s_c;
  config.fidelity_threshold = f.threshold;
  config.validate();

  auto meta = base_metadata("trial");
  meta.insert(meta.end(), {{"n", std::to_string(f.n)},
                           {"sigma_db", num(f.sigma.value_db())},
                           {"sigma", num(config.sigma)},
                           {"s_c", std::to_string(f.s_c)},
                           {"threshold", num(f.threshold)},
                           {"seed", std::to_string(f.seed)}});
  print_header(out, meta);

  Rng rng(f.seed);
  const auto r = run_trial(config, rng);
  auto bits = [](const std::vector<int>& v) {
    std::string s;
    for (int b : v) s += static_cast<char>('0' + b);
    return s.empty() ? std::string("-") : s;
  };
  auto flag = [](bool b) { return b ? "true" : "false"; };
  out << "x_D: " << num(r.x_d) << '\n'
      << "p_D: " << num(r.p_d) << '\n'
      << "t: " << r.t << '\n'
      << "delta_p: " << num(r.delta_p) << '\n'
      << "bits_alice: " << bits(r.outcome.bits_alice) << '\n'
      << "bits_bob: " << bits(r.outcome.bits_bob) << '\n'
      << "abandoned: " << flag(r.abandoned) << '\n'
      << "boundary_t: " << flag(r.boundary_t) << '\n'
      << "classified: " << flag(r.classified) << '\n'
      << "success: " << flag(r.success) << '\n'
      << "fidelity: " << num(r.fidelity) << '\n';
  if (r.extra_pair_fidelity) out << "extra_pair_fidelity: " << num(*r.extra_pair_fidelity) << '\n';
  if (r.t_s) out << "t_s: " << *r.t_s << '\n';
  out << "bell_pairs: " << r.bell_pairs << '\n';

  if (!f.transcript.empty()) {
    std::ofstream file(f.transcript);
    if (!file) throw IoError("cannot open transcript file '" + f.transcript + "'");
    write_transcript(file, r.transcript);
    if (!file) throw IoError("failed writing transcript file '" + f.transcript + "'");
  }
  return kExitOk;
}

Metadata spec_metadata(const SweepSpec& spec) {
  return {{"variable", std::string(to_string(spec.variable))},
          {"grid", [&] {
             std::string s;
             for (double v : spec.grid) s += (s.empty() ? "" : ",") + short_num(v);
             return s;
           }()},
          {"n", std::to_string(spec.fixed.n)},
          {"sigma", num(spec.fixed.sigma)},
          {"sigma_db", num(db_from_sigma(spec.fixed.sigma))},
          {"s_c", std::to_string(spec.fixed.s_c)},
          {"threshold", num(spec.fixed.fidelity_threshold)},
          {"trials", std::to_string(spec.trials_per_point)},
          {"seed", std::to_string(spec.seed)},
          {"cutoff", num(spec.cutoff)},
          {"threads", std::to_string(spec.threads)}};
}

void write_rows(const std::vector<SweepRow>& rows, Format format, const std::string& path,
                const Metadata& meta, std::ostream& out) {
  if (path.empty()) {
    if (format == Format::Json) {
      write_json(out, rows, meta);
    } else {
      write_csv(out, rows, meta);
    }
  } else {
    emit(rows, format, path, meta);
  }
}

void write_curves(const std::vector<SqueezingCurve>& curves, Format format, const std::string& path,
                  const Metadata& meta, std::ostream& out) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    sink = &file;
  }
  if (format == Format::Json) {
    nlohmann::json doc;
    for (const auto& [k, v] : meta) doc["metadata"][k] = v;
    doc["curves"] = nlohmann::json::array();
    for (const auto& c : curves) {
      doc["curves"].push_back({{"p_target", c.p_target},
                               {"n_b", c.n_b},
                               {"sigma_db", c.sigma_db},
                               {"slope", c.fit.slope},
                               {"intercept", c.fit.intercept}});
    }
    *sink << doc.dump(2) << '\n';
  } else {
    write_squeezing_csv(*sink, curves, meta);
  }
  if (!*sink) throw IoError("failed writing '" + (path.empty() ? std::string("<stdout>") : path) + "'");
}

int cmd_sweep(const SweepFlags& f, std::ostream& out) {
  const Format format = resolve_format(f);
  if (f.threads == 0) throw InvalidParameter("--threads must be at least 1");

  if (f.preset == "fig2") {
    auto meta = base_metadata("sweep");
    meta.insert(meta.end(), {{"preset", "fig2"}, {"description", preset_description("fig2")}});
    write_curves(fig2_preset(), format, f.output, meta, out);
    return kExitOk;
  }

  std::vector<PresetSeries> series;
  if (!f.preset.empty()) {
    series = preset_series(f.preset, f.trials, f.seed);
  } else {
    SweepSpec spec;
    spec.variable = parse_sweep_variable(f.variable);
    spec.grid = f.grid.empty() ? std::vector<double>{f.sigma.value_db()} : parse_grid(f.grid);
    spec.fixed.n = f.n;
    spec.fixed.sigma = f.sigma.value();
    spec.fixed.s_c = f.s_c;
    spec.fixed.fidelity_threshold = f.threshold;
    spec.trials_per_point = f.trials;
    spec.seed = f.seed;
    spec.cutoff = f.cutoff;
    series.push_back({"", spec});
  }

  for (auto& s : series) {
    s.spec.threads = f.threads;
    s.spec.validate();
  }
  for (const auto& s : series) {
    auto meta = base_metadata("sweep");
    if (!f.preset.empty()) {
      meta.insert(meta.end(), {{"preset", f.preset}, {"series", s.label}});
    }
    const auto spec_meta = spec_metadata(s.spec);
    meta.insert(meta.end(), spec_meta.begin(), spec_meta.end());
    const auto rows = sweep(s.spec);
    const std::string path =
        f.output.empty() || s.label.empty() || series.size() == 1 ? f.output : series_path(f.output, s.label);
    write_rows(rows, format, path, meta, out);
    if (!path.empty()) out << "wrote " << rows.size() << " rows to " << path << '\n';
  }
  return kExitOk;
}

Metadata analytic_metadata(const std::string& what, const AnalyticFlags& f) {
  auto meta = base_metadata("analytic " + what);
  meta.insert(meta.end(), {{"c", num(f.c)}});
  return meta;
}

int cmd_analytic_sc(const AnalyticFlags& f, std::ostream& out) {
  const double sigma = f.sigma.value();
  auto meta = analytic_metadata("sc", f);
  meta.insert(meta.end(), {{"sigma_db", num(f.sigma.value_db())}, {"n_b", std::to_string(f.n_b)}});
  const int s_c = analytic::min_sc(sigma, f.n_b, f.c);
  print_header(out, meta);
  out << "s_c_real: " << num(analytic::required_sc_real(sigma, f.n_b, f.c)) << '\n';
  out << "s_c: " << s_c << '\n';
  return kExitOk;
}

int cmd_analytic_bounds(const AnalyticFlags& f, std::ostream& out) {
  const auto pred = analytic::predict(f.sigma.value(), f.n_b, f.c);
  auto meta = analytic_metadata("bounds", f);
  meta.insert(meta.end(), {{"sigma_db", num(f.sigma.value_db())}, {"n_b", std::to_string(f.n_b)}});
  print_header(out, meta);
  out << "s_c: " << pred.s_c << '\n'
      << "p_lower: " << num(pred.p_lower) << '\n'
      << "p_success: " << num(pred.p_success) << '\n'
      << "p_upper: " << num(pred.p_upper) << '\n';
  return kExitOk;
}

int cmd_analytic_min_squeezing(const AnalyticFlags& f, std::ostream& out) {
  auto meta = analytic_metadata("min-squeezing", f);
  meta.insert(meta.end(), {{"p_target", num(f.p_target)}, {"n_b", std::to_string(f.n_b)}});
  const double db = analytic::min_squeezing_db(f.p_target, f.n_b, f.c);
  print_header(out, meta);
  out << "sigma_db: " << num(db) << '\n';
  return kExitOk;
}

int cmd_analytic_prob(const AnalyticFlags& f, std::ostream& out) {
  ProtocolConfig config;
  config.n = f.n;
  config.s_c = f.s_c;
  config.sigma = f.sigma.value();
  config.validate();
  auto meta = analytic_metadata("prob", f);
  meta.insert(meta.end(), {{"n", std::to_string(f.n)},
                           {"sigma_db", num(f.sigma.value_db())},
                           {"s_c", std::to_string(f.s_c)}});
  print_header(out, meta);
  out << "n_b: " << config.n_b() << '\n'
      << "p_success: " << num(analytic::success_prob(config.sigma, f.s_c, config.n_b())) << '\n'
      << "p_extra_pair: " << num(analytic::prob_extra_pair(f.n, config.sigma)) << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyOptions& options, std::ostream& out) {
  auto meta = base_metadata("verify");
  meta.insert(meta.end(), {{"quick", options.quick ? "true" : "false"},
                           {"trials", std::to_string(options.trials)},
                           {"seed", std::to_string(options.seed)},
                           {"threads", std::to_string(options.threads)},
                           {"quad_points", std::to_string(options.quad_points)}});
  if (options.u_scale != 1.0) meta.emplace_back("u_scale", num(options.u_scale));
  print_header(out, meta);
  if (options.threads == 0) throw InvalidParameter("--threads must be at least 1");
  if (options.quad_points < 2) throw InvalidParameter("--quad-points must be at least 2");

  const auto results = run_verify(options);
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS" : "FAIL") << ' ' << r.name << ": " << r.detail << '\n';
    failed += r.passed ? 0 : 1;
  }
  out << "summary: " << results.size() - failed << " passed, " << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::uint64_t default_seed = 1;
  try {
    default_seed = parse_seed_env();
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Hybrid CV/DV entanglement swapping: simulation and closed-form predictions", "cvdvswap"};
  app.set_version_flag("--version", CVDVSWAP_VERSION);
  app.require_subcommand(1);
  app.footer(std::string("Environment: ") + kSeedEnv + " overrides the default seed (1).\n"
             "Exit status: 0 clean run, 1 runtime or verification failure, 2 usage error.");

  TrialFlags trial;
  trial.seed = default_seed;
  auto* trial_cmd = app.add_subcommand("trial", "Run one protocol trial and print its outcome");
  trial_cmd->add_option("--n", trial.n, "Qubits per register")->capture_default_str();
  trial.sigma.add_to(*trial_cmd);
  trial_cmd->add_option("--sc", trial.s_c, "Extra purification qubits")->capture_default_str();
  trial_cmd->add_option("--threshold", trial.threshold, "Fidelity threshold")->capture_default_str();
  trial_cmd->add_option("--seed", trial.seed, "RNG seed")->capture_default_str();
  trial_cmd->add_option("--transcript", trial.transcript, "Write the classical message log here");

  SweepFlags sw;
  sw.seed = default_seed;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo parameter sweep");
  std::string preset_help = "Named parameterization:";
  for (auto name : kPresetNames) preset_help += "\n  " + preset_description(name);
  auto* preset_opt = sweep_cmd->add_option("--preset", sw.preset, preset_help)
                         ->check(CLI::IsMember(std::vector<std::string>(std::begin(kPresetNames), std::end(kPresetNames))));
  std::vector<CLI::Option*> explicit_opts;
  explicit_opts.push_back(sweep_cmd->add_option("--var", sw.variable, "sigma_db | fidelity_threshold | n_b")
                              ->capture_default_str());
  explicit_opts.push_back(
      sweep_cmd->add_option("--grid", sw.grid, "start:stop:step (inclusive) or comma list"));
  explicit_opts.push_back(sweep_cmd->add_option("--n", sw.n, "Qubits per register")->capture_default_str());
  explicit_opts.push_back(sweep_cmd->add_option("--sc", sw.s_c, "Extra purification qubits")->capture_default_str());
  explicit_opts.push_back(
      sweep_cmd->add_option("--threshold", sw.threshold, "Fidelity threshold")->capture_default_str());
  explicit_opts.push_back(sweep_cmd->add_option("--cutoff", sw.cutoff, "Cutoff for the bounds columns")
                              ->capture_default_str());
  explicit_opts.push_back(
      sweep_cmd->add_option("--sigma-db", sw.sigma.db, "Squeezing in dB")->capture_default_str());
  explicit_opts.push_back(sweep_cmd->add_option("--sigma-linear", sw.sigma.linear, "Squeezing as linear sigma"));
  explicit_opts.back()->excludes(explicit_opts[explicit_opts.size() - 2]);
  for (auto* opt : explicit_opts) preset_opt->excludes(opt);
  sweep_cmd->add_option("--trials", sw.trials, "Trials per grid point")->capture_default_str();
  sweep_cmd->add_option("--seed", sw.seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("-o,--output", sw.output,
                        "Output file; multi-series presets write <stem>_<label><ext>. Default stdout");
  sweep_cmd->add_option("--format", sw.format, "csv | json (default from the output extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads")->capture_default_str();

  AnalyticFlags an;
  auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form predictions");
  analytic_cmd->require_subcommand(1);
  auto add_c = [&](CLI::App* cmd) { cmd->add_option("--c", an.c, "Fidelity cutoff constant")->capture_default_str(); };
  auto* sc_cmd = analytic_cmd->add_subcommand("sc", "Smallest s_c meeting the cutoff");
  an.sigma.add_to(*sc_cmd);
  sc_cmd->add_option("--nb", an.n_b, "Target Bell pairs")->capture_default_str();
  add_c(sc_cmd);
  auto* bounds_cmd = analytic_cmd->add_subcommand("bounds", "Lower bound, value and upper bound of p_success");
  an.sigma.add_to(*bounds_cmd);
  bounds_cmd->add_option("--nb", an.n_b, "Target Bell pairs")->capture_default_str();
  add_c(bounds_cmd);
  auto* minsq_cmd = analytic_cmd->add_subcommand("min-squeezing", "Least squeezing reaching a target probability");
  minsq_cmd->add_option("--p-target", an.p_target, "Target success probability")->required();
  minsq_cmd->add_option("--nb", an.n_b, "Target Bell pairs")->capture_default_str();
  add_c(minsq_cmd);
  auto* prob_cmd = analytic_cmd->add_subcommand("prob", "Success probability for a register layout");
  prob_cmd->add_option("--n", an.n, "Qubits per register")->capture_default_str();
  an.sigma.add_to(*prob_cmd);
  prob_cmd->add_option("--sc", an.s_c, "Extra purification qubits")->capture_default_str();

  VerifyOptions vf;
  vf.seed = default_seed;
  auto* verify_cmd = app.add_subcommand("verify", "Invariant suite and oracle triangle for n <= 3");
  verify_cmd->add_flag("--quick", vf.quick, "Reduced grid and trial count");
  verify_cmd->add_option("--trials", vf.trials, "Monte Carlo trials per point (0: automatic)")->capture_default_str();
  verify_cmd->add_option("--seed", vf.seed, "Seed")->capture_default_str();
  verify_cmd->add_option("--threads", vf.threads, "Worker threads")->capture_default_str();
  verify_cmd->add_option("--quad-points", vf.quad_points, "Quadrature points per shift cell")->capture_default_str();
  verify_cmd->add_option("--perturb-u", vf.u_scale)->group("");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CVDVSWAP_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (trial_cmd->parsed()) return cmd_trial(trial, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sw, out);
    if (sc_cmd->parsed()) return cmd_analytic_sc(an, out);
    if (bounds_cmd->parsed()) return cmd_analytic_bounds(an, out);
    if (minsq_cmd->parsed()) return cmd_analytic_min_squeezing(an, out);
    if (prob_cmd->parsed()) return cmd_analytic_prob(an, out);
    if (verify_cmd->parsed()) return cmd_verify(vf, out);
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const NoSolution& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cvdvswap::cli
