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

#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <string>

#include "cvdvswap/analytic.hpp"
#include "cvdvswap/experiments.hpp"
#include "cvdvswap/gaussian_modes.hpp"
#include "cvdvswap/protocol.hpp"
#include "cvdvswap/register.hpp"

namespace cvdvswap::cli {
namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

JointState random_state(int n, Rng& rng) {
  JointState s(n);
  for (auto& a : s.amplitudes()) a = {rng.normal(), rng.normal()};
  s.normalize();
  return s;
}

double max_diff(const JointState& a, const JointState& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
  }
  return worst;
}

CheckResult bound_check(std::string name, double value, double limit) {
  return {std::move(name), value < limit, fmt("max deviation %.3g (limit %.0e)", value, limit)};
}

CheckResult qft_unitarity() {
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    std::vector<JointState> cols;
    for (std::size_t j = 0; j < dim; ++j) cols.push_back(qft_apply(JointState::basis(n, j, 0), Side::Alice));
    for (std::size_t a = 0; a < dim; ++a) {
      for (std::size_t b = 0; b < dim; ++b) {
        std::complex<double> dot;
        for (std::size_t k = 0; k < dim; ++k) dot += std::conj(cols[a](k, 0)) * cols[b](k, 0);
        worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
      }
    }
  }
  return bound_check("qft_unitarity", worst, 1e-12);
}

CheckResult qft_round_trip(Rng& rng) {
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const auto s = random_state(n, rng);
    for (Side side : {Side::Alice, Side::Bob}) {
      worst = std::max(worst, max_diff(qft_apply(qft_apply(s, side), side, true), s));
    }
  }
  return bound_check("qft_round_trip", worst, 1e-12);
}

CheckResult displacement_group_law(Rng& rng) {
  double worst = 0.0;
  const auto s = random_state(4, rng);
  for (std::int64_t a = -20; a <= 20; a += 3) {
    for (std::int64_t b = -9; b <= 9; b += 4) {
      worst = std::max(worst, max_diff(displace(displace(s, Side::Bob, a), Side::Bob, b),
                                       displace(s, Side::Bob, ((a + b) % 16 + 16) % 16)));
    }
  }
  return {"displacement_group_law", worst == 0.0, fmt("max deviation %.3g (exact)", worst)};
}

CheckResult norm_preservation(Rng& rng) {
  double worst = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const auto s = random_state(n, rng);
    for (Side side : {Side::Alice, Side::Bob}) {
      worst = std::max(worst, std::abs(qft_apply(s, side).norm_squared() - 1.0));
      worst = std::max(worst, std::abs(displace(s, side, 3).norm_squared() - 1.0));
      worst = std::max(worst, std::abs(apply_xbar_phase(s, side, 1.7).norm_squared() - 1.0));
    }
  }
  return bound_check("norm_preservation", worst, 1e-10);
}

CheckResult xd_independence() {
  double worst = 0.0;
  const SqueezedMode mode(3.16);
  for (int n : {2, 3}) {
    const auto ref = post_homodyne_state(n, mode, 0.0, 0.4);
    for (double x_d : {1.3, -2.2, 4.0}) {
      worst = std::max(worst, max_diff(apply_phase_correction(post_homodyne_state(n, mode, x_d, 0.4), x_d), ref));
    }
  }
  return bound_check("xd_independence", worst, 1e-10);
}

CheckResult pd_round_trip(Rng& rng) {
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double p = (rng.uniform01() - 0.5) * 16.0;
    const auto d = decompose_pd(p, 3);
    if (!(d.delta_p > -0.5 && d.delta_p <= 0.5)) worst = 1.0;
    worst = std::max(worst, std::abs((static_cast<double>(d.t) + d.delta_p) * delta(3) / std::numbers::sqrt2 - p));
  }
  return bound_check("pd_round_trip", worst, 1e-12);
}

// Probability that p_D lands in a retained cell, from the Gaussian mixture CDF.
double kept_mass(int n, double sigma) {
  const std::int64_t size = std::int64_t{1} << n;
  const double cell = delta(n) / std::numbers::sqrt2;
  const double hi = (static_cast<double>(size / 2) + 0.5) * cell;
  const double sd = 1.0 / (sigma * std::numbers::sqrt2);
  double total = 0.0;
  for (std::int64_t d = -(size - 1); d <= size - 1; ++d) {
    const double mu = static_cast<double>(d) * cell;
    const double mass = 0.5 * (std::erfc((-hi - mu) / (sd * std::numbers::sqrt2)) -
                               std::erfc((hi - mu) / (sd * std::numbers::sqrt2)));
    total += static_cast<double>(size - std::llabs(d)) * mass;
  }
  return total / static_cast<double>(size * size);
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  Rng rng(options.seed);
  results.push_back(qft_unitarity());
  results.push_back(qft_round_trip(rng));
  results.push_back(displacement_group_law(rng));
  results.push_back(norm_preservation(rng));
  results.push_back(xd_independence());
  results.push_back(pd_round_trip(rng));

  const std::uint64_t trials = options.trials > 0 ? options.trials : (options.quick ? 20000 : 100000);
  const std::vector<double> levels = options.quick ? std::vector<double>{15.0, 18.0}
                                                   : std::vector<double>{12.0, 15.0, 18.0};
  struct Register {
    int n, s_c;
  };
  std::uint64_t point = 0;
  for (const auto reg : {Register{2, 0}, Register{3, 0}, Register{3, 1}}) {
    for (double db : levels) {
      const auto tag = "n" + std::to_string(reg.n) + "_sc" + std::to_string(reg.s_c) + "_" +
                       std::to_string(static_cast<int>(db)) + "db";
      ProtocolConfig config;
      config.n = reg.n;
      config.s_c = reg.s_c;
      config.sigma = sigma_from_db(db);
      config.fidelity_threshold = 0.99;
      const SqueezedMode oracle_mode(config.sigma, options.u_scale);
      const auto bf = brute_force(reg.n, oracle_mode, reg.s_c, 0.99, options.quad_points);

      const double expected_kept = kept_mass(reg.n, config.sigma);
      results.push_back({"oracle_normalization_" + tag, std::abs(bf.p_kept - expected_kept) < 1e-8,
                         fmt("kept %.12f vs mixture CDF %.12f", bf.p_kept, expected_kept)});

      const auto mc = monte_carlo_point(config, trials, split_seed(options.seed, point++), options.threads);
      const double z_limit = 3.0 * mc.stderr_;
      results.push_back({"mc_vs_oracle_" + tag, std::abs(mc.p_success - bf.p_success) <= z_limit,
                         fmt("mc %.5f oracle %.5f 3se %.5f", mc.p_success, bf.p_success, z_limit)});

      const double margin = (std::exp2(reg.s_c) - 0.5) * std::sqrt(std::numbers::pi / std::exp2(reg.n)) * config.sigma;
      if (margin > analytic::kDesignCutoff) {
        const double an = mc.p_analytic;
        results.push_back({"oracle_vs_analytic_" + tag, std::abs(bf.p_success - an) <= 0.01,
                           fmt("oracle %.5f analytic %.5f", bf.p_success, an)});
      }
    }
  }
  return results;
}

}  // namespace cvdvswap::cli
