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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvdvswap/analytic.hpp"
#include "cvdvswap/gaussian_modes.hpp"
#include "cvdvswap/protocol.hpp"

namespace cvdvswap {

enum class SweepVariable { SigmaDb, FidelityThreshold, Nb };

std::string_view to_string(SweepVariable variable);
SweepVariable parse_sweep_variable(std::string_view name);

/// One row of an emitted sweep table.
struct SweepRow {
  std::string swept_var;
  double value = 0.0;
  double p_success = 0.0;
  double stderr_ = 0.0;         // sqrt(p (1 - p) / N)
  double p_analytic = 0.0;      // success_prob(sigma, s_c, n_b)
  double p_lower = 0.0;
  double p_upper = 0.0;
  double mean_fidelity = 0.0;   // mean n_b-pair fidelity over successes
  double extra_pair_rate = 0.0; // successes carrying n_b + 1 pairs, per trial
  double abandon_rate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  bool operator==(const SweepRow&) const = default;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::SigmaDb;
  std::vector<double> grid;
  /// Values not swept. For SigmaDb sweeps `fixed.sigma` is ignored; for Nb
  /// sweeps `fixed.n` is ignored and n = n_b + 1 + s_c.
  ProtocolConfig fixed;
  std::uint64_t trials_per_point = 1000;
  std::uint64_t seed = 1;
  double cutoff = analytic::kFitCutoff;  // for the bounds columns
  unsigned threads = 1;

  /// Throws InvalidParameter unless the grid is nonempty and strictly monotone
  /// and trials_per_point >= 1.
  void validate() const;
};

/// Compact per-trial record used for aggregation.
struct TrialRecord {
  bool abandoned = false;
  bool classified = false;
  double fidelity = 0.0;
  double extra_pair_fidelity = -1.0;  // < 0 when t != 0
};

/// Simulates `trials` independent executions. Trial i draws from
/// Rng(split_seed(seed, i)), so the records do not depend on `threads`.
std::vector<TrialRecord> simulate_trials(const ProtocolConfig& config, std::uint64_t trials,
                                         std::uint64_t seed, unsigned threads = 1);

/// Aggregates records at a given threshold. Analytic columns are filled from
/// `config` and `cutoff`; swept_var/value are left for the caller.
SweepRow summarize(std::span<const TrialRecord> records, const ProtocolConfig& config,
                   double threshold, double cutoff, std::uint64_t seed);

/// Monte Carlo estimate at a single configuration, judged at config.fidelity_threshold.
SweepRow monte_carlo_point(const ProtocolConfig& config, std::uint64_t trials, std::uint64_t seed,
                           unsigned threads = 1, double cutoff = analytic::kFitCutoff);

/// One row per grid point. Point i uses split_seed(spec.seed, i), except for
/// fidelity-threshold sweeps, which judge one shared trial set drawn with
/// split_seed(spec.seed, 0) at every threshold.
std::vector<SweepRow> sweep(const SweepSpec& spec);

struct BruteForceResult {
  double p_success = 0.0;     // classified and fidelity >= threshold
  double p_extra_pair = 0.0;  // the subset carrying n_b + 1 pairs
  double p_classified = 0.0;  // classified, any fidelity
  double p_kept = 0.0;        // total probability of non-abandoned p_D
};

/// Deterministic success probability: composite Simpson over p_D on every
/// retained t-cell, with an exact enumeration of purification outcomes on the
/// untruncated state. Requires n <= 4 and quad_points >= 3 (rounded up to odd).
BruteForceResult brute_force(int n, const SqueezedMode& mode, int s_c, double threshold,
                             int quad_points);

double brute_force_success_prob(int n, const SqueezedMode& mode, int s_c, double threshold,
                                int quad_points);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit least_squares(std::span<const double> x, std::span<const double> y);

struct SqueezingCurve {
  double p_target = 0.0;
  std::vector<int> n_b;
  std::vector<double> sigma_db;
  LineFit fit;
};

/// Minimum squeezing per n_b in [n_b_lo, n_b_hi] and the fitted dB-per-pair line.
SqueezingCurve fig2_curve(double p_target, int n_b_lo, int n_b_hi,
                          double c = analytic::kDesignCutoff);

/// Named parameterizations. Each series is one sweep table.
struct PresetSeries {
  std::string label;  // file-name suffix, e.g. "sc2" or "sigma15db"
  SweepSpec spec;
};

inline constexpr std::string_view kPresetNames[] = {"fig2", "fig3", "fig4a", "fig4b", "fig5"};

/// Sweep series for fig3, fig4a, fig4b and fig5 (fig2 is analytic; see fig2_preset).
std::vector<PresetSeries> preset_series(std::string_view name, std::uint64_t trials,
                                        std::uint64_t seed);

/// fig2: p_target in {0.30, 0.40, 0.48}, n_b in [3, 8], c = 2.2.
std::vector<SqueezingCurve> fig2_preset();

std::string preset_description(std::string_view name);

}  // namespace cvdvswap
