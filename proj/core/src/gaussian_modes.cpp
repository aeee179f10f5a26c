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

#include "cvdvswap/gaussian_modes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cvdvswap/errors.hpp"
#include "cvdvswap/register.hpp"

namespace cvdvswap {

double db_from_sigma(double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("db_from_sigma: sigma must be positive");
  return 20.0 * std::log10(sigma);
}

double sigma_from_db(double db) {
  if (!std::isfinite(db)) throw InvalidParameter("sigma_from_db: non-finite decibel value");
  return std::pow(10.0, db / 20.0);
}

SqueezedMode::SqueezedMode(double sigma_, double u_scale_) : sigma(sigma_), u_scale(u_scale_) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("SqueezedMode: sigma must be positive and finite, got " +
                           std::to_string(sigma));
  }
}

double SqueezedMode::g(double x) const {
  return std::exp(-x * x / (2.0 * sigma * sigma)) /
         (std::sqrt(std::sqrt(std::numbers::pi)) * std::sqrt(sigma));
}

double SqueezedMode::u(double p) const {
  return u_scale * std::sqrt(sigma / std::sqrt(std::numbers::pi)) *
         std::exp(-0.5 * sigma * sigma * p * p);
}

double SqueezedMode::hhat(double x_d, double p) const {
  return u_scale * std::numbers::inv_sqrtpi * std::exp(-x_d * x_d / (2.0 * sigma * sigma)) *
         std::exp(-0.5 * p * p * sigma * sigma);
}

double SqueezedMode::xd_density(double x_d) const {
  return std::numbers::inv_sqrtpi / sigma * std::exp(-x_d * x_d / (sigma * sigma));
}

double SqueezedMode::pd_density(double p_d, int n) const {
  const double step = delta(n) / std::numbers::sqrt2;
  const std::int64_t size = std::int64_t{1} << n;
  double total = 0.0;
  for (std::int64_t d = -(size - 1); d <= size - 1; ++d) {
    const double uu = u(p_d - static_cast<double>(d) * step);
    total += static_cast<double>(size - std::llabs(d)) * uu * uu;
  }
  return total / static_cast<double>(size * size);
}

double SqueezedMode::sample_xd(Rng& rng) const {
  return sigma / std::numbers::sqrt2 * rng.normal();
}

double SqueezedMode::sample_pd(int n, Rng& rng) const {
  const double step = delta(n) / std::numbers::sqrt2;
  const std::uint64_t size = std::uint64_t{1} << n;
  const auto j = static_cast<std::int64_t>(rng.uniform_below(size));
  const auto k = static_cast<std::int64_t>(rng.uniform_below(size));
  return static_cast<double>(j - k) * step + rng.normal() / (sigma * std::numbers::sqrt2);
}

PdDecomposition decompose_pd(double p_d, int n) {
  if (!std::isfinite(p_d)) throw InvalidParameter("decompose_pd: non-finite p_D");
  const double scaled = std::numbers::sqrt2 * p_d / delta(n);
  // Half-open cell (t - 1/2, t + 1/2]: a tie at +1/2 stays with the lower t.
  double t = std::ceil(scaled - 0.5);
  double frac = scaled - t;
  if (frac > 0.5) {
    t += 1.0;
    frac = scaled - t;
  } else if (frac <= -0.5) {
    t -= 1.0;
    frac = scaled - t;
  }
  return PdDecomposition{static_cast<std::int64_t>(t), frac};
}

}  // namespace cvdvswap
