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

#include "cvdvswap/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <tuple>

#include "cvdvswap/errors.hpp"
#include "cvdvswap/register.hpp"
#include "cvdvswap/rng.hpp"

namespace cvdvswap {

std::string_view to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::SigmaDb: return "sigma_db";
    case SweepVariable::FidelityThreshold: return "fidelity_threshold";
    case SweepVariable::Nb: return "n_b";
  }
  return "?";
}

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "sigma_db") return SweepVariable::SigmaDb;
  if (name == "fidelity_threshold") return SweepVariable::FidelityThreshold;
  if (name == "n_b") return SweepVariable::Nb;
  throw InvalidParameter("unknown sweep variable '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (grid.empty()) throw InvalidParameter("SweepSpec: grid is empty");
  const bool up = grid.size() < 2 || grid[1] > grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (up ? !(grid[i] > grid[i - 1]) : !(grid[i] < grid[i - 1])) {
      throw InvalidParameter("SweepSpec: grid must be strictly monotone");
    }
  }
  if (trials_per_point < 1) throw InvalidParameter("SweepSpec: trials_per_point must be >= 1");
  if (variable == SweepVariable::Nb) {
    for (double v : grid) {
      if (v != std::floor(v) || v < 1) throw InvalidParameter("SweepSpec: n_b grid must hold positive integers");
    }
  }
}

std::vector<TrialRecord> simulate_trials(const ProtocolConfig& config, std::uint64_t trials,
                                         std::uint64_t seed, unsigned threads) {
  config.validate();
  std::vector<TrialRecord> records(trials);
  constexpr std::uint64_t kChunk = 256;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= trials) return;
      const std::uint64_t end = std::min(trials, begin + kChunk);
      for (std::uint64_t i = begin; i < end; ++i) {
        Rng rng(split_seed(seed, i));
        const auto trial = run_trial(config, rng);
        auto& r = records[i];
        r.abandoned = trial.abandoned;
        r.classified = trial.classified;
        r.fidelity = trial.fidelity;
        r.extra_pair_fidelity = trial.extra_pair_fidelity.value_or(-1.0);
      }
    }
  };
  const unsigned count = std::max(1U, threads);
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  }
  return records;
}

SweepRow summarize(std::span<const TrialRecord> records, const ProtocolConfig& config,
                   double threshold, double cutoff, std::uint64_t seed) {
  SweepRow row;
  row.trials = records.size();
  row.seed = seed;
  const int n_b = config.n_b();
  std::uint64_t successes = 0, extra = 0, abandoned = 0;
  double fidelity_sum = 0.0;
  for (const auto& r : records) {
    if (r.abandoned) {
      ++abandoned;
      continue;
    }
    if (!r.classified) continue;
    if (r.extra_pair_fidelity >= 0.0 && r.extra_pair_fidelity >= threshold) {
      ++successes;
      ++extra;
      fidelity_sum += r.fidelity;
    } else if (r.fidelity >= threshold) {
      ++successes;
      fidelity_sum += r.fidelity;
    }
  }
  const double total = static_cast<double>(row.trials);
  if (row.trials > 0) {
    row.p_success = static_cast<double>(successes) / total;
    row.stderr_ = std::sqrt(row.p_success * (1.0 - row.p_success) / total);
    row.extra_pair_rate = static_cast<double>(extra) / total;
    row.abandon_rate = static_cast<double>(abandoned) / total;
  }
  row.mean_fidelity = successes > 0 ? fidelity_sum / static_cast<double>(successes) : 0.0;
  row.p_analytic = analytic::success_prob(config.sigma, config.s_c, n_b);
  std::tie(row.p_lower, row.p_upper) = analytic::prob_bounds(config.sigma, n_b, cutoff);
  return row;
}

SweepRow monte_carlo_point(const ProtocolConfig& config, std::uint64_t trials, std::uint64_t seed,
                           unsigned threads, double cutoff) {
  const auto records = simulate_trials(config, trials, seed, threads);
  auto row = summarize(records, config, config.fidelity_threshold, cutoff, seed);
  row.swept_var = "point";
  row.value = db_from_sigma(config.sigma);
  return row;
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows;
  const std::string var(to_string(spec.variable));
  if (spec.variable == SweepVariable::FidelityThreshold) {
    const std::uint64_t seed = split_seed(spec.seed, 0);
    const auto records = simulate_trials(spec.fixed, spec.trials_per_point, seed, spec.threads);
    for (double threshold : spec.grid) {
      if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidParameter("sweep: fidelity threshold outside [0, 1]");
      }
      auto row = summarize(records, spec.fixed, threshold, spec.cutoff, seed);
      row.swept_var = var;
      row.value = threshold;
      rows.push_back(std::move(row));
    }
    return rows;
  }
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    ProtocolConfig config = spec.fixed;
    if (spec.variable == SweepVariable::SigmaDb) {
      config.sigma = sigma_from_db(spec.grid[i]);
    } else {
      config.n = static_cast<int>(spec.grid[i]) + 1 + config.s_c;
    }
    const std::uint64_t seed = split_seed(spec.seed, i);
    const auto records = simulate_trials(config, spec.trials_per_point, seed, spec.threads);
    auto row = summarize(records, config, config.fidelity_threshold, spec.cutoff, seed);
    row.swept_var = var;
    row.value = spec.grid[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Weight of every purification outcome at one p_D, and whether it counts.
// Outcomes are enumerated as (fine pattern, first bit); patterns that cannot
// succeed (sign rule) are reported with zero weight.
struct OutcomeSample {
  double weight = 0.0;
  bool success = false;
  bool extra = false;
};

class CellIntegrand {
 public:
  CellIntegrand(int n, const SqueezedMode& mode, int s_c, double threshold, std::int64_t t)
      : n_(n), s_c_(s_c), n_b_(n - 1 - s_c), threshold_(threshold), t_(t), mode_(mode),
        spec_(RegisterSpec::make(n)), by_difference_(2 * spec_.dim() - 1) {
    for (int q = n - s_c; q < n; ++q) fine_.push_back(q);
  }

  std::size_t outcomes() const { return std::size_t{2} << s_c_; }

  // Also returns the total squared norm (the p_D density) through `density`.
  std::vector<OutcomeSample> operator()(double p_d, double& density) {
    const std::size_t dim = spec_.dim();
    const double cell = spec_.delta / std::numbers::sqrt2;
    const double norm = 1.0 / static_cast<double>(dim);
    for (std::size_t d = 0; d < by_difference_.size(); ++d) {
      const double diff = static_cast<double>(d) - static_cast<double>(dim - 1);
      by_difference_[d] = norm * mode_.u(p_d - diff * cell);
    }
    // Unnormalized: its squared norm is the p_D density.
    JointState state(n_);
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t k = 0; k < dim; ++k) state(j, k) = by_difference_[j + dim - 1 - k];
    }
    density = state.norm_squared();
    state = displace(std::move(state), Side::Alice, -t_);

    const int first[] = {0};
    const std::int64_t half = std::int64_t{1} << (n_ - 1);
    std::vector<OutcomeSample> out(outcomes());
    const std::uint32_t patterns = std::uint32_t{1} << s_c_;
    for (std::uint32_t pat = 0; pat < patterns; ++pat) {
      std::vector<int> bits(static_cast<std::size_t>(s_c_));
      for (int i = 0; i < s_c_; ++i) bits[static_cast<std::size_t>(i)] = (pat >> (s_c_ - 1 - i)) & 1U;
      const JointState after_fine = s_c_ > 0 ? project(state, fine_, fine_, bits, bits) : state;
      if (after_fine.norm_squared() == 0.0) continue;
      const bool extra_ok = t_ == 0 && fidelity_to_bell(after_fine, n_b_ + 1) >= threshold_;
      for (int b : {0, 1}) {
        const bool sign_ok = b == 0 ? (t_ >= 0 && t_ <= half) : (t_ <= 0 && t_ >= -half);
        if (!sign_ok) continue;
        const int bit[] = {b};
        const JointState final_state = project(after_fine, first, first, bit, bit);
        auto& o = out[2 * pat + static_cast<std::uint32_t>(b)];
        o.weight = final_state.norm_squared();
        if (o.weight == 0.0) continue;
        o.extra = extra_ok;
        o.success = extra_ok || fidelity_to_bell(final_state, n_b_) >= threshold_;
      }
    }
    return out;
  }

 private:
  int n_, s_c_, n_b_;
  double threshold_;
  std::int64_t t_;
  SqueezedMode mode_;
  RegisterSpec spec_;
  std::vector<double> by_difference_;
  std::vector<int> fine_;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}


using Flag = bool OutcomeSample::*;

// Locates where outcome o's flag flips between a (value flag_a) and b.
double find_flip(CellIntegrand& f, std::size_t o, Flag flag, double a, double b, bool flag_a) {
  double density = 0.0;
  for (int iter = 0; iter < 60 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++iter) {
    const double mid = 0.5 * (a + b);
    if (f(mid, density)[o].*flag == flag_a) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

// Integral of outcome o's weight over the part of [a, b] where `flag` holds.
// The flag is assumed to flip at most once between neighbouring probes.
double flagged_integral(CellIntegrand& f, std::size_t o, Flag flag, double a, double b,
                        const OutcomeSample& sa, const OutcomeSample& sm, const OutcomeSample& sb) {
  const double m = 0.5 * (a + b);
  if (sa.*flag == sm.*flag && sm.*flag == sb.*flag) {
    return sa.*flag ? simpson(a, b, sa.weight, sm.weight, sb.weight) : 0.0;
  }
  double density = 0.0;
  auto piece = [&](double x0, double x1, double w0, double w1) {
    const double wm = f(0.5 * (x0 + x1), density)[o].weight;
    return simpson(x0, x1, w0, wm, w1);
  };
  double total = 0.0;
  const double xs[] = {a, m, b};
  const OutcomeSample* ss[] = {&sa, &sm, &sb};
  for (int k = 0; k < 2; ++k) {
    const double x0 = xs[k], x1 = xs[k + 1];
    const auto& s0 = *ss[k];
    const auto& s1 = *ss[k + 1];
    if (s0.*flag == s1.*flag) {
      if (s0.*flag) total += piece(x0, x1, s0.weight, s1.weight);
      continue;
    }
    const double flip = find_flip(f, o, flag, x0, x1, s0.*flag);
    const double w_flip = f(flip, density)[o].weight;
    total += s0.*flag ? piece(x0, flip, s0.weight, w_flip) : piece(flip, x1, w_flip, s1.weight);
  }
  return total;
}

}  // namespace

BruteForceResult brute_force(int n, const SqueezedMode& mode, int s_c, double threshold,
                             int quad_points) {
  if (n < 2 || n > 4) throw InvalidParameter("brute_force: n must lie in [2, 4]");
  if (s_c < 0 || n - 1 - s_c < 1) throw InvalidParameter("brute_force: s_c leaves no Bell pair");
  if (quad_points < 3) throw InvalidParameter("brute_force: quad_points must be >= 3");
  const int points = quad_points % 2 == 1 ? quad_points : quad_points + 1;

  const double cell = delta(n) / std::numbers::sqrt2;
  const std::int64_t half = std::int64_t{1} << (n - 1);
  const int panels = (points - 1) / 2;

  BruteForceResult acc;
  for (std::int64_t t = -half; t <= half; ++t) {
    CellIntegrand f(n, mode, s_c, threshold, t);
    const double lo = (static_cast<double>(t) - 0.5) * cell;
    const double width = cell / panels;
    double density_a = 0.0, density_m = 0.0, density_b = 0.0;
    auto at_a = f(lo, density_a);
    for (int panel = 0; panel < panels; ++panel) {
      const double a = lo + width * panel;
      const double b = lo + width * (panel + 1);
      const auto at_m = f(0.5 * (a + b), density_m);
      const auto at_b = f(b, density_b);
      acc.p_kept += simpson(a, b, density_a, density_m, density_b);
      for (std::size_t o = 0; o < f.outcomes(); ++o) {
        const double classified = simpson(a, b, at_a[o].weight, at_m[o].weight, at_b[o].weight);
        acc.p_classified += classified;
        const double success =
            flagged_integral(f, o, &OutcomeSample::success, a, b, at_a[o], at_m[o], at_b[o]);
        const double extra =
            t == 0 ? flagged_integral(f, o, &OutcomeSample::extra, a, b, at_a[o], at_m[o], at_b[o])
                   : 0.0;
        acc.p_success += success;
        acc.p_extra_pair += extra;
      }
      at_a = at_b;
      density_a = density_b;
    }
  }
  return acc;
}

double brute_force_success_prob(int n, const SqueezedMode& mode, int s_c, double threshold,
                                int quad_points) {
  return brute_force(n, mode, s_c, threshold, quad_points).p_success;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidParameter("least_squares: need at least two paired points");
  }
  const double count = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) throw InvalidParameter("least_squares: x values are all equal");
  LineFit fit;
  fit.slope = (count * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / count;
  return fit;
}

SqueezingCurve fig2_curve(double p_target, int n_b_lo, int n_b_hi, double c) {
  if (n_b_lo < 1 || n_b_hi <= n_b_lo) throw InvalidParameter("fig2_curve: invalid n_b range");
  SqueezingCurve curve;
  curve.p_target = p_target;
  std::vector<double> xs;
  for (int n_b = n_b_lo; n_b <= n_b_hi; ++n_b) {
    curve.n_b.push_back(n_b);
    curve.sigma_db.push_back(analytic::min_squeezing_db(p_target, n_b, c));
    xs.push_back(n_b);
  }
  curve.fit = least_squares(xs, curve.sigma_db);
  return curve;
}

namespace {

std::vector<double> int_grid(int lo, int hi) {
  std::vector<double> g;
  for (int v = lo; v <= hi; ++v) g.push_back(v);
  return g;
}

const std::vector<double> kFig4Thresholds = {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999};
const std::vector<double> kFig5Thresholds = {0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95, 0.99, 0.999};

std::vector<PresetSeries> fig4_series(double sigma_db, std::uint64_t trials, std::uint64_t seed) {
  std::vector<PresetSeries> out;
  for (int s_c = 0; s_c <= 3; ++s_c) {
    SweepSpec spec;
    spec.variable = SweepVariable::FidelityThreshold;
    spec.grid = kFig4Thresholds;
    spec.fixed.s_c = s_c;
    spec.fixed.n = 4 + 1 + s_c;
    spec.fixed.sigma = sigma_from_db(sigma_db);
    spec.trials_per_point = trials;
    spec.seed = split_seed(seed, static_cast<std::uint64_t>(s_c));
    out.push_back({"sc" + std::to_string(s_c), spec});
  }
  return out;
}

}  // namespace

std::vector<PresetSeries> preset_series(std::string_view name, std::uint64_t trials,
                                        std::uint64_t seed) {
  std::vector<PresetSeries> out;
  if (name == "fig3") {
    for (int s_c = 0; s_c <= 3; ++s_c) {
      SweepSpec spec;
      spec.variable = SweepVariable::SigmaDb;
      spec.grid = int_grid(10, 24);
      spec.fixed.s_c = s_c;
      spec.fixed.n = 3 + 1 + s_c;
      spec.fixed.fidelity_threshold = 0.99;
      spec.trials_per_point = trials;
      spec.seed = split_seed(seed, static_cast<std::uint64_t>(s_c));
      spec.cutoff = analytic::kFitCutoff;
      out.push_back({"sc" + std::to_string(s_c), spec});
    }
  } else if (name == "fig4a") {
    out = fig4_series(10.0, trials, seed);
  } else if (name == "fig4b") {
    out = fig4_series(15.0, trials, seed);
  } else if (name == "fig5") {
    const double levels[] = {5.0, 8.0, 10.0, 12.0, 15.0};
    for (std::size_t i = 0; i < std::size(levels); ++i) {
      SweepSpec spec;
      spec.variable = SweepVariable::FidelityThreshold;
      spec.grid = kFig5Thresholds;
      spec.fixed.n = 2;
      spec.fixed.s_c = 0;
      spec.fixed.sigma = sigma_from_db(levels[i]);
      spec.trials_per_point = trials;
      spec.seed = split_seed(seed, i);
      out.push_back({"sigma" + std::to_string(static_cast<int>(levels[i])) + "db", spec});
    }
  } else if (name == "fig2") {
    throw InvalidParameter("preset fig2 is analytic; use fig2_preset()");
  } else {
    throw InvalidParameter("unknown preset '" + std::string(name) + "'");
  }
  return out;
}

std::vector<SqueezingCurve> fig2_preset() {
  std::vector<SqueezingCurve> curves;
  for (double p : {0.30, 0.40, 0.48}) curves.push_back(fig2_curve(p, 3, 8, analytic::kDesignCutoff));
  return curves;
}

std::string preset_description(std::string_view name) {
  if (name == "fig2") {
    return "fig2: minimum squeezing (dB) vs n_b in [3, 8] for p_target in {0.30, 0.40, 0.48}, c = 2.2";
  }
  if (name == "fig3") {
    return "fig3: success vs squeezing, n_b = 3, threshold 0.99, sigma 10..24 dB, one table per s_c in 0..3";
  }
  if (name == "fig4a") {
    return "fig4a: success vs fidelity threshold, n_b = 4, sigma 10 dB, one table per s_c in 0..3";
  }
  if (name == "fig4b") {
    return "fig4b: success vs fidelity threshold, n_b = 4, sigma 15 dB, one table per s_c in 0..3";
  }
  if (name == "fig5") {
    return "fig5: single Bell pair (n = 2, s_c = 0), success vs fidelity threshold, sigma in {5, 8, 10, 12, 15} dB";
  }
  throw InvalidParameter("unknown preset '" + std::string(name) + "'");
}

}  // namespace cvdvswap
