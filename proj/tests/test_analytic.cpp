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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvdvswap/errors.hpp"
#include "cvdvswap/gaussian_modes.hpp"
#include "support/oracles.hpp"

namespace cvdvswap::analytic {
namespace {

const double kSigma10 = 3.1622776601683795;
const double kSigma15 = 5.623413251903491;

TEST(Erf, MatchesSeriesOracle) {
  for (int i = 0; i <= 600; ++i) {
    const double x = 0.01 * i;
    const double ref = testing::erf_reference(x);
    EXPECT_NEAR(erf(x), ref, 1e-12 * std::max(1.0, std::abs(ref))) << "x=" << x;
  }
  EXPECT_EQ(erf(0.0), 0.0);
  EXPECT_EQ(erf(-1.3), -erf(1.3));
}

TEST(ProbNbPairs, FrozenValue) {
  EXPECT_NEAR(prob_nb_pairs(2, kSigma15), 0.7496811286501247, 1e-14);
  EXPECT_EQ(prob_nb_pairs(2, 0.0), 0.0);
}

TEST(ProbNbPairs, LargeSigmaCeiling) {
  EXPECT_NEAR(prob_nb_pairs(2, 1e6), 0.75, 1e-15);
  for (int n = 2; n <= 8; ++n) EXPECT_NEAR(prob_nb_pairs(n, 1e6), 0.5 + std::ldexp(1.0, -n), 1e-15);
}

TEST(ProbNbPairs, StrictlyIncreasingInSigma) {
  for (int n = 2; n <= 6; ++n) {
    double prev = -1.0;
    for (double db = -10.0; db <= 20.0; db += 0.25) {
      const double p = prob_nb_pairs(n, sigma_from_db(db));
      EXPECT_GT(p, prev);
      prev = p;
    }
  }
}

TEST(ProbExtraPair, LimitsAndRatio) {
  EXPECT_NEAR(prob_extra_pair(2, 1e6), 0.25, 1e-15);
  EXPECT_EQ(prob_extra_pair(3, 0.0), 0.0);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform_below(8));
    const double sigma = 0.2 + 20.0 * rng.uniform01();
    const double size = std::ldexp(1.0, n);
    EXPECT_NEAR(prob_extra_pair(n, sigma) / prob_nb_pairs(n, sigma), (1.0 / size) / (0.5 + 1.0 / size), 1e-14);
  }
}

TEST(SuccessProb, IdentityWithRegisterForm) {
  for (double sigma : {1.0, 3.16, 5.62, 17.0}) {
    EXPECT_EQ(success_prob(sigma, 0, 1), prob_nb_pairs(2, sigma));
    for (int s_c = 0; s_c <= 4; ++s_c) {
      for (int n_b = 1; n_b <= 6; ++n_b) {
        EXPECT_NEAR(success_prob(sigma, s_c, n_b), prob_nb_pairs(n_b + 1 + s_c, sigma), 1e-15);
      }
    }
  }
}

TEST(SuccessProb, DecreasingInSc) {
  const double sigma = sigma_from_db(12.0);
  for (int s_c = 0; s_c < 5; ++s_c) EXPECT_GT(success_prob(sigma, s_c, 2), success_prob(sigma, s_c + 1, 2));
}

TEST(RequiredSc, FrozenValues) {
  EXPECT_NEAR(required_sc_real(kSigma10, 4, 2.2), 2.5576602571108814, 1e-12);
  EXPECT_NEAR(required_sc_real(kSigma15, 4, 2.2), 1.2970494981181394, 1e-12);
  EXPECT_NEAR(required_sc_real(1e9, 3, 2.2), -1.0, 1e-6);
}

TEST(RequiredSc, CeilingSatisfiesCutoffInequality) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const double sigma = 1.0 + 30.0 * rng.uniform01();
    const int n_b = 1 + static_cast<int>(rng.uniform_below(7));
    const double c = 0.5 + 3.0 * rng.uniform01();
    const double s_c = std::ceil(required_sc_real(sigma, n_b, c));
    const double lhs = (std::exp2(s_c) - 0.5) * std::sqrt(std::numbers::pi / std::exp2(n_b + 1 + s_c)) * sigma;
    EXPECT_GT(lhs, c * (1.0 - 1e-12));
  }
}

TEST(MinSc, Examples) {
  EXPECT_EQ(min_sc(kSigma10, 4, 2.2), 3);
  EXPECT_EQ(min_sc(kSigma15, 4, 2.2), 2);
  EXPECT_EQ(min_sc(1e6, 4, 2.2), 0);
}

TEST(MaxSuccessProb, NondecreasingOnGrid) {
  for (int n_b = 1; n_b <= 5; ++n_b) {
    double prev = -1.0;
    for (int i = 0; i < 200; ++i) {
      const double p = max_success_prob(sigma_from_db(30.0 * i / 199.0), n_b, 2.2);
      EXPECT_GE(p, prev) << "n_b=" << n_b << " i=" << i;
      prev = p;
    }
  }
}

TEST(MaxSuccessProb, StepsAtScTransitions) {
  // Crossing an s_c decrement jumps the probability up.
  int prev_sc = min_sc(sigma_from_db(10.0), 3, 2.17);
  double prev_p = max_success_prob(sigma_from_db(10.0), 3, 2.17);
  int jumps = 0;
  for (double db = 10.05; db <= 24.0; db += 0.05) {
    const int sc = min_sc(sigma_from_db(db), 3, 2.17);
    const double p = max_success_prob(sigma_from_db(db), 3, 2.17);
    if (sc < prev_sc) {
      EXPECT_GT(p - prev_p, 0.005);
      ++jumps;
    }
    prev_sc = sc;
    prev_p = p;
  }
  EXPECT_GE(jumps, 2);
}

TEST(ProbBounds, StrictOrdering) {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double sigma = sigma_from_db(40.0 * rng.uniform01() - 5.0);
    const int n_b = 1 + static_cast<int>(rng.uniform_below(10));
    const double c = 0.5 + 3.0 * rng.uniform01();
    const auto [lo, hi] = prob_bounds(sigma, n_b, c);
    EXPECT_LT(lo, hi);
  }
}

TEST(ProbBounds, BracketMaximum) {
  for (int n_b = 1; n_b <= 5; ++n_b) {
    for (int i = 0; i < 100; ++i) {
      const double sigma = sigma_from_db(30.0 * i / 99.0);
      const auto [lo, hi] = prob_bounds(sigma, n_b, 2.2);
      const double p = max_success_prob(sigma, n_b, 2.2);
      EXPECT_LT(lo, p) << n_b << " " << i;
      EXPECT_LE(p, hi) << n_b << " " << i;
    }
  }
}

// The recursion drops a 2^{-n_b} prefactor term, so agreement is bounded by
// that term and reaches 0.01 from n_b = 6.
TEST(ProbBounds, DoublingRecursion) {
  for (int n_b = 4; n_b <= 10; ++n_b) {
    for (double db = 12.0; db <= 30.0; db += 1.0) {
      const double sigma = sigma_from_db(db);
      const double gap =
          std::abs(prob_bounds(std::sqrt(2.0) * sigma, n_b + 1, 2.2).second - prob_bounds(sigma, n_b, 2.2).second);
      EXPECT_LT(gap, std::ldexp(1.0, -(n_b + 1)));
      if (n_b >= 6) EXPECT_LT(gap, 0.01) << n_b << " " << db;
    }
  }
}

// Independent bisection on the same closed forms at 40 significant digits.
TEST(MinSqueezing, FrozenOracleValues) {
  const double expected[3][6] = {
      {13.406629491588221, 16.416929448228033, 19.427229404867845, 22.437529361507657, 25.447829318147469,
       28.458129274787281},
      {14.360892208685034, 17.794444659797766, 21.029936074899214, 24.156687564676261, 27.226246221971249,
       30.266443217522626},
      {17.504021106947557, 21.291641632060746, 24.780102726058553, 28.06473789542069, 31.223972988770348,
       34.312220789833691},
  };
  const double targets[3] = {0.30, 0.40, 0.48};
  for (int i = 0; i < 3; ++i) {
    for (int n_b = 3; n_b <= 8; ++n_b) {
      EXPECT_NEAR(min_squeezing_db(targets[i], n_b, 2.2), expected[i][n_b - 3], 2e-6) << targets[i] << " " << n_b;
    }
  }
}

// The root is exact where max_success_prob is continuous; a target that falls
// inside an s_c jump returns the jump location.
TEST(MinSqueezing, RoundTrip) {
  for (double target : {0.30, 0.35, 0.40, 0.45, 0.48}) {
    for (int n_b = 3; n_b <= 8; ++n_b) {
      const double db = min_squeezing_db(target, n_b, 2.2);
      const double at = max_success_prob(sigma_from_db(db), n_b, 2.2);
      EXPECT_GE(at, target);
      EXPECT_LT(max_success_prob(sigma_from_db(db - 1e-5), n_b, 2.2), target);
      if (min_sc(sigma_from_db(db - 1e-5), n_b, 2.2) == min_sc(sigma_from_db(db), n_b, 2.2)) {
        EXPECT_NEAR(at, target, 1e-6) << target << " " << n_b;
      }
    }
  }
}

TEST(MinSqueezing, PerPairStepApproachesThreeDb) {
  const double step = 10.0 * std::log10(2.0);
  double prev_gap = 1e9;
  for (int n_b = 3; n_b <= 11; ++n_b) {
    const double gap = min_squeezing_db(0.4, n_b + 1, 2.2) - min_squeezing_db(0.4, n_b, 2.2) - step;
    EXPECT_GT(gap, 0.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 0.005);
}

TEST(MinSqueezing, UnreachableTarget) {
  EXPECT_THROW(min_squeezing_db(0.6, 3, 2.2), NoSolution);
  EXPECT_THROW(min_squeezing_db(1.5, 3, 2.2), InvalidParameter);
}

TEST(Saturation, ConstantTermAndLinearity) {
  EXPECT_NEAR(saturation_threshold_db(1, 2.2) - 10.0 * std::log10(2.0), 7.897554802782410, 1e-12);
  EXPECT_NEAR(saturation_threshold_db(2, 2.2), 13.918154716062034, 1e-12);
  for (int n = 2; n < 10; ++n) {
    EXPECT_NEAR(saturation_threshold_db(n + 1, 2.2) - saturation_threshold_db(n, 2.2), 3.0102999566398120, 1e-12);
  }
}

TEST(Saturation, ProbabilityNearCeilingAboveThreshold) {
  for (int n = 2; n <= 8; ++n) {
    const double sigma = sigma_from_db(saturation_threshold_db(n, 2.2));
    EXPECT_GE(prob_nb_pairs(n, sigma), 0.99 * (0.5 + std::ldexp(1.0, -n)));
  }
}

TEST(Predict, ConsistentFields) {
  const auto p = predict(kSigma10, 4, 2.2);
  EXPECT_EQ(p.s_c, 3);
  EXPECT_EQ(p.p_success, success_prob(kSigma10, 3, 4));
  EXPECT_LT(p.p_lower, p.p_success);
  EXPECT_LE(p.p_success, p.p_upper);
}

}  // namespace
}  // namespace cvdvswap::analytic
