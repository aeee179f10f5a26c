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

#include "cvdvswap/analytic.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "cvdvswap/errors.hpp"
#include "cvdvswap/gaussian_modes.hpp"

namespace cvdvswap::analytic {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidParameter(std::string(what) + " must be positive and finite");
  }
}

void require_nonnegative_sigma(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be nonnegative");
}

// (c/sigma) sqrt(2^{n_b}/pi) + sqrt(2^{n_b} c^2 / (pi sigma^2) + 1)
double sc_argument(double sigma, int n_b, double c) {
  const double a = c / sigma * std::sqrt(std::ldexp(1.0, n_b) / std::numbers::pi);
  return a + std::sqrt(a * a + 1.0);
}

}  // namespace

double erf(double x) { return std::erf(x); }

double prob_nb_pairs(int n, double sigma) {
  if (n < 1) throw InvalidParameter("prob_nb_pairs: n must be positive");
  require_nonnegative_sigma(sigma);
  const double size = std::ldexp(1.0, n);
  return (0.5 + 1.0 / size) * erf(0.5 * sigma * std::sqrt(std::numbers::pi / size));
}

double prob_extra_pair(int n, double sigma) {
  if (n < 1) throw InvalidParameter("prob_extra_pair: n must be positive");
  require_nonnegative_sigma(sigma);
  const double size = std::ldexp(1.0, n);
  return erf(0.5 * sigma * std::sqrt(std::numbers::pi / size)) / size;
}

double success_prob(double sigma, int s_c, int n_b) {
  if (s_c < 0) throw InvalidParameter("success_prob: s_c must be nonnegative");
  if (n_b < 1) throw InvalidParameter("success_prob: n_b must be positive");
  // (1/2 + 1/(2^{n_b} 2^{s_c+1})) erf(sigma / sqrt(2^{s_c+1}) sqrt(pi / 2^{n_b+2}))
  // is prob_nb_pairs at n = n_b + 1 + s_c term by term.
  return prob_nb_pairs(n_b + 1 + s_c, sigma);
}

double required_sc_real(double sigma, int n_b, double c) {
  require_positive(sigma, "sigma");
  require_positive(c, "cutoff c");
  if (n_b < 1) throw InvalidParameter("required_sc_real: n_b must be positive");
  return 2.0 * std::log2(sc_argument(sigma, n_b, c)) - 1.0;
}

int min_sc(double sigma, int n_b, double c) {
  require_positive(sigma, "sigma");
  require_positive(c, "cutoff c");
  if (n_b < 1) throw InvalidParameter("min_sc: n_b must be positive");
  const double value = std::ceil(2.0 * std::log2(sc_argument(sigma, n_b, c))) - 1.0;
  return value < 0.0 ? 0 : static_cast<int>(value);
}

double max_success_prob(double sigma, int n_b, double c) {
  return success_prob(sigma, min_sc(sigma, n_b, c), n_b);
}

std::pair<double, double> prob_bounds(double sigma, int n_b, double c) {
  require_positive(sigma, "sigma");
  require_positive(c, "cutoff c");
  if (n_b < 1) throw InvalidParameter("prob_bounds: n_b must be positive");
  const double pairs = std::ldexp(1.0, n_b);
  const double pi_s2 = std::numbers::pi * sigma * sigma;
  const double root = c * std::sqrt(pairs) + std::sqrt(pairs * c * c + pi_s2);
  const double ratio = pi_s2 / (root * root);
  const double upper =
      (0.5 + ratio / pairs) * erf(pi_s2 / (2.0 * std::sqrt(pairs) * root));
  const double lower =
      (0.5 + ratio / (2.0 * pairs)) * erf(pi_s2 / (2.0 * std::sqrt(2.0 * pairs) * root));
  return {lower, upper};
}

double min_squeezing_db(double p_target, int n_b, double c, double lo_db, double hi_db,
                        double tol_db) {
  if (!(p_target > 0.0 && p_target < 1.0)) {
    throw InvalidParameter("min_squeezing_db: target probability must lie in (0, 1)");
  }
  if (!(hi_db > lo_db) || !(tol_db > 0.0)) {
    throw InvalidParameter("min_squeezing_db: invalid bracket or tolerance");
  }
  auto gap = [&](double db) { return max_success_prob(sigma_from_db(db), n_b, c) - p_target; };
  if (gap(hi_db) < 0.0) {
    throw NoSolution("min_squeezing_db: p_target = " + std::to_string(p_target) +
                     " not reached for n_b = " + std::to_string(n_b) + " below " +
                     std::to_string(hi_db) + " dB");
  }
  if (gap(lo_db) >= 0.0) return lo_db;
  // Ties (gap == 0) count as reached, so bisect on the sign of a step function
  // that is negative strictly below the target.
  auto reached = [&](double db) { return gap(db) >= 0.0 ? 1.0 : -1.0; };
  auto done = [tol_db](double a, double b) { return std::abs(b - a) <= tol_db; };
  const auto bracket = boost::math::tools::bisect(reached, lo_db, hi_db, done);
  return bracket.second;
}

double saturation_threshold_db(int n, double c) {
  if (n < 1) throw InvalidParameter("saturation_threshold_db: n must be positive");
  require_positive(c, "cutoff c");
  return 10.0 * std::log10(2.0) * n + 20.0 * std::log10(2.0 * c / std::sqrt(std::numbers::pi));
}

Prediction predict(double sigma, int n_b, double c) {
  Prediction p;
  p.sigma = sigma;
  p.n_b = n_b;
  p.c = c;
  p.s_c = min_sc(sigma, n_b, c);
  p.p_success = success_prob(sigma, p.s_c, n_b);
  std::tie(p.p_lower, p.p_upper) = prob_bounds(sigma, n_b, c);
  return p;
}

}  // namespace cvdvswap::analytic
