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

// Closed-form success probabilities for Gaussian squeezed modes, the choice
// of the number of fine purification qubits, and squeezing-requirement solvers.
//
// Parameters: sigma is linear squeezing, n the register size, n_b the number
// of target Bell pairs, s_c the number of fine qubits measured besides qubit 0,
// c the dimensionless cutoff beyond which u(p) is treated as zero.

#include <utility>

namespace cvdvswap::analytic {

/// Cutoff used when choosing s_c for a design fidelity of about 0.99.
inline constexpr double kDesignCutoff = 2.2;
/// Cutoff that best matches 0.99-threshold Monte Carlo.
inline constexpr double kFitCutoff = 2.17;

/// Error function. Backed by std::erf (glibc: correctly rounded to within 1 ulp).
double erf(double x);

/// Probability of ending with n - 1 - s_c pairs for an n-qubit register:
/// (1/2 + 2^{-n}) erf(sigma/2 sqrt(pi / 2^n)).
double prob_nb_pairs(int n, double sigma);

/// Probability of the t = 0 extra pair: 2^{-n} erf(sigma/2 sqrt(pi / 2^n)).
double prob_extra_pair(int n, double sigma);

/// (1/2 + 1 / (2^{n_b} 2^{s_c+1})) erf(sigma / sqrt(2^{s_c+1}) sqrt(pi / 2^{n_b+2})).
double success_prob(double sigma, int s_c, int n_b);

/// Continuous lower bound on s_c:
/// 2 log2((c/sigma) sqrt(2^{n_b}/pi) + sqrt(2^{n_b} c^2 / (pi sigma^2) + 1)) - 1.
double required_sc_real(double sigma, int n_b, double c);

/// Smallest admissible integer s_c, clamped at 0.
int min_sc(double sigma, int n_b, double c);

/// success_prob at s_c = min_sc(sigma, n_b, c).
double max_success_prob(double sigma, int n_b, double c);

/// (lower, upper) such that lower < max_success_prob <= upper.
std::pair<double, double> prob_bounds(double sigma, int n_b, double c);

/// Smallest squeezing in dB, searched by bisection over [lo_db, hi_db], at
/// which max_success_prob reaches p_target. Throws NoSolution when the target
/// is not reached inside the bracket.
double min_squeezing_db(double p_target, int n_b, double c, double lo_db = 0.0,
                        double hi_db = 60.0, double tol_db = 1e-6);

/// 10 log10(2) n + 20 log10(2c / sqrt(pi)): squeezing above which s_c = 0
/// suffices and prob_nb_pairs(n, .) sits within erf(c) of its ceiling.
double saturation_threshold_db(int n, double c);

struct Prediction {
  double sigma = 0.0;
  int n_b = 1;
  double c = kDesignCutoff;
  int s_c = 0;
  double p_success = 0.0;
  double p_lower = 0.0;
  double p_upper = 0.0;
};

Prediction predict(double sigma, int n_b, double c);

}  // namespace cvdvswap::analytic
