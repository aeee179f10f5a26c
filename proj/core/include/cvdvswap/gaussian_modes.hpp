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

#include "cvdvswap/rng.hpp"

namespace cvdvswap {

/// Squeezing in decibels, 20 log10(sigma).
double db_from_sigma(double sigma);
double sigma_from_db(double db);

/// Gaussian squeezed-vacuum wavefunction g(x) = pi^{-1/4} sigma^{-1/2} exp(-x^2 / 2 sigma^2).
///
/// `u_scale` multiplies u(p) and h-hat. It is 1 in normal use; the verify
/// command sets it slightly off to check that the oracles notice.
struct SqueezedMode {
  double sigma = 1.0;
  double u_scale = 1.0;

  explicit SqueezedMode(double sigma_, double u_scale_ = 1.0);

  static SqueezedMode from_db(double db) { return SqueezedMode(sigma_from_db(db)); }

  /// g(x), the position-space wavefunction.
  double g(double x) const;

  /// u(p) = sqrt(sigma / sqrt(pi)) exp(-sigma^2 p^2 / 2). Unit L2 norm.
  double u(double p) const;

  /// h-hat_{x_D}(p) = pi^{-1/2} exp(-x_D^2 / 2 sigma^2) exp(-p^2 sigma^2 / 2).
  /// This is the one place a non-Gaussian mode family would plug in.
  double hhat(double x_d, double p) const;

  /// Density of the X-quadrature homodyne outcome, (1 / sigma sqrt(pi)) exp(-x^2 / sigma^2).
  double xd_density(double x_d) const;

  /// Density of the P-quadrature outcome for n-qubit registers:
  /// 2^{-2n} sum_{j,k} |u(p - (xbar_j - xbar_k) / sqrt 2)|^2, summed over j - k.
  double pd_density(double p_d, int n) const;

  /// Zero-mean normal draw with standard deviation sigma / sqrt 2.
  double sample_xd(Rng& rng) const;

  /// Exact mixture draw from pd_density: d = j - k from uniform j, k, then a
  /// normal with mean d * delta / sqrt 2 and standard deviation 1 / (sigma sqrt 2).
  double sample_pd(int n, Rng& rng) const;
};

/// sqrt(2) p_D = (t + delta_p) delta, with delta_p in (-1/2, 1/2].
struct PdDecomposition {
  std::int64_t t = 0;
  double delta_p = 0.0;
};

PdDecomposition decompose_pd(double p_d, int n);

}  // namespace cvdvswap
