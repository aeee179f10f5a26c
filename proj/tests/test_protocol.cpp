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

#include "cvdvswap/protocol.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cvdvswap/analytic.hpp"
#include "cvdvswap/errors.hpp"
#include "cvdvswap/gaussian_modes.hpp"

namespace cvdvswap {
namespace {

double diagonal_weight(const JointState& s) {
  double total = 0.0;
  for (std::size_t j = 0; j < s.dim(); ++j) total += std::norm(s(j, j));
  return total;
}

MeasurementOutcome outcome_of(std::vector<int> alice, std::vector<int> bob) {
  MeasurementOutcome out;
  out.alice_qubits.push_back(0);
  out.bob_qubits.push_back(0);
  out.bits_alice = std::move(alice);
  out.bits_bob = std::move(bob);
  return out;
}

TEST(ProtocolConfig, Validation) {
  ProtocolConfig ok;
  EXPECT_NO_THROW(ok.validate());
  EXPECT_EQ(ok.n_b(), 1);
  ProtocolConfig bad = ok;
  bad.n = 1;
  EXPECT_THROW(bad.validate(), InvalidParameter);
  bad = ok;
  bad.s_c = 1;
  EXPECT_THROW(bad.validate(), InvalidParameter);
  bad = ok;
  bad.sigma = 0.0;
  EXPECT_THROW(bad.validate(), InvalidParameter);
  bad = ok;
  bad.fidelity_threshold = 1.5;
  EXPECT_THROW(bad.validate(), InvalidParameter);
  bad = ok;
  bad.n = 13;
  EXPECT_THROW(bad.validate(), InvalidParameter);
}

TEST(PostHomodyne, ZeroXdGivesRealNonnegativeAmplitudes) {
  const auto s = post_homodyne_state(3, SqueezedMode(2.0), 0.0, 0.37);
  for (const auto& a : s.amplitudes()) {
    EXPECT_EQ(a.imag(), 0.0);
    EXPECT_GE(a.real(), 0.0);
  }
}

TEST(PostHomodyne, OneQubitHighSqueezingIsDiagonal) {
  const auto s = post_homodyne_state(1, SqueezedMode(10.0), 0.0, 0.0);
  EXPECT_GT(diagonal_weight(s), 0.999);
}

TEST(PostHomodyne, MatchesClosedFormAmplitudes) {
  const int n = 2;
  const SqueezedMode mode(3.0);
  const double x_d = 0.8, p_d = -0.45;
  const auto s = post_homodyne_state(n, mode, x_d, p_d);
  std::vector<Amplitude> raw(16);
  double norm2 = 0.0;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      const double phase = -x_d * (xbar(n, j) + xbar(n, k)) / std::sqrt(2.0);
      const double h = mode.hhat(x_d, p_d - (xbar(n, j) - xbar(n, k)) / std::sqrt(2.0));
      raw[j * 4 + k] = std::polar(h, phase);
      norm2 += h * h;
    }
  }
  for (int i = 0; i < 16; ++i) EXPECT_LT(std::abs(s.amplitudes()[i] - raw[i] / std::sqrt(norm2)), 1e-14);
}

TEST(PostHomodyne, NormalizedForRandomOutcomes) {
  Rng rng(17);
  const SqueezedMode mode(4.0);
  for (int i = 0; i < 100; ++i) {
    const double x_d = mode.sample_xd(rng);
    const double p_d = mode.sample_pd(3, rng);
    EXPECT_NEAR(post_homodyne_state(3, mode, x_d, p_d).norm_squared(), 1.0, 1e-12);
  }
}

TEST(PostHomodyne, UnderflowIsDegenerate) {
  EXPECT_THROW(post_homodyne_state(2, SqueezedMode(100.0), 0.0, 50.0), DegenerateOutcome);
}

TEST(PhaseCorrection, RemovesXdDependence) {
  const SqueezedMode mode(3.16);
  for (int n : {2, 3, 4}) {
    const auto reference = post_homodyne_state(n, mode, 0.0, 0.4);
    for (double x_d : {1.3, -2.7, 5.0}) {
      const auto corrected = apply_phase_correction(post_homodyne_state(n, mode, x_d, 0.4), x_d);
      EXPECT_NEAR(corrected.norm_squared(), 1.0, 1e-12);
      for (std::size_t i = 0; i < reference.size(); ++i) {
        EXPECT_LT(std::abs(corrected.amplitudes()[i] - reference.amplitudes()[i]), 1e-10);
      }
    }
  }
}

TEST(PhaseCorrection, ZeroIsIdentity) {
  const auto s = post_homodyne_state(2, SqueezedMode(2.0), 0.3, 0.1);
  const auto c = apply_phase_correction(s, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(c.amplitudes()[i], s.amplitudes()[i]);
}

TEST(DisplacementCorrection, MovesAliceIndex) {
  const auto moved = apply_displacement_correction(JointState::basis(2, 3, 1), 2);
  EXPECT_EQ(moved(1, 1), Amplitude(1.0));
  const auto s = post_homodyne_state(2, SqueezedMode(2.0), 0.0, 0.1);
  const auto same = apply_displacement_correction(s, 0);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(same.amplitudes()[i], s.amplitudes()[i]);
}

TEST(DisplacementCorrection, ConcentratesOnDiagonal) {
  const SqueezedMode mode = SqueezedMode::from_db(15.0);
  Rng rng(23);
  int checked = 0;
  while (checked < 200) {
    const double p_d = mode.sample_pd(2, rng);
    const auto d = decompose_pd(p_d, 2);
    if (d.t == 0 || abandon_check(d.t, 2)) continue;
    const auto before = post_homodyne_state(2, mode, 0.0, p_d);
    const auto after = apply_displacement_correction(before, d.t);
    EXPECT_GT(diagonal_weight(after), diagonal_weight(before)) << "p_D=" << p_d;
    ++checked;
  }
}

TEST(TsReduce, Examples) {
  const int one[] = {1};
  const int zero[] = {0};
  const int zero_one[] = {0, 1};
  EXPECT_EQ(ts_reduce(5, one), 3);
  EXPECT_EQ(ts_reduce(5, zero), 2);
  EXPECT_EQ(ts_reduce(7, zero_one), 2);
  EXPECT_EQ(ts_reduce(7, std::span<const int>{}), 7);
}

TEST(TsReduce, NegativeShiftsUseMathematicalFloorAndCeil) {
  const int one[] = {1};
  const int zero[] = {0};
  EXPECT_EQ(ts_reduce(-5, one), -2);
  EXPECT_EQ(ts_reduce(-5, zero), -3);
  EXPECT_EQ(ts_reduce(-4, one), -2);
  for (std::int64_t t = -40; t <= 40; ++t) {
    for (int b0 : {0, 1}) {
      for (int b1 : {0, 1}) {
        const int bits[] = {b0, b1};
        double v = static_cast<double>(t);
        v = b1 ? std::ceil(v / 2) : std::floor(v / 2);
        v = b0 ? std::ceil(v / 2) : std::floor(v / 2);
        EXPECT_EQ(ts_reduce(t, bits), static_cast<std::int64_t>(v));
      }
    }
  }
}

TEST(AbandonCheck, ClosedInterval) {
  EXPECT_FALSE(abandon_check(2, 2));
  EXPECT_TRUE(abandon_check(3, 2));
  EXPECT_FALSE(abandon_check(-2, 2));
  EXPECT_TRUE(abandon_check(-3, 2));
  EXPECT_FALSE(abandon_check(0, 2));
}

TEST(ClassifySuccess, Rules) {
  EXPECT_TRUE(classify_success(0, outcome_of({1}, {1}), 2));
  EXPECT_TRUE(classify_success(0, outcome_of({0}, {0}), 2));
  EXPECT_FALSE(classify_success(3, outcome_of({1}, {1}), 3));
  EXPECT_TRUE(classify_success(3, outcome_of({0}, {0}), 3));
  EXPECT_TRUE(classify_success(-4, outcome_of({1}, {1}), 3));
  EXPECT_FALSE(classify_success(-1, outcome_of({0}, {0}), 3));
  EXPECT_FALSE(classify_success(0, outcome_of({0}, {1}), 2));
  EXPECT_FALSE(classify_success(1, outcome_of({0, 1}, {0, 0}), 3));
}

TEST(Purify, ShapesAndOutcomeOrder) {
  Rng rng(9);
  const auto state = post_homodyne_state(4, SqueezedMode(20.0), 0.0, 0.0);
  auto staged = purify_staged(state, 2, rng);
  EXPECT_EQ(staged.outcome.alice_qubits, (std::vector<int>{0, 2, 3}));
  EXPECT_EQ(staged.after_fine.qubits(), 2);
  EXPECT_EQ(staged.final_state.qubits(), 1);
  auto [outcome, post] = purify(post_homodyne_state(2, SqueezedMode(20.0), 0.0, 0.0), 0, rng);
  EXPECT_EQ(outcome.alice_qubits, (std::vector<int>{0}));
  EXPECT_EQ(post.qubits(), 1);
  EXPECT_THROW(purify(state, 3, rng), InvalidParameter);
}

TEST(Purify, HighSqueezingZeroShiftBitsAgree) {
  const SqueezedMode mode = SqueezedMode::from_db(20.0);
  Rng rng(31);
  int agree = 0, total = 0;
  while (total < 10000) {
    const double p_d = mode.sample_pd(2, rng);
    if (decompose_pd(p_d, 2).t != 0) continue;
    auto [outcome, post] = purify(post_homodyne_state(2, mode, 0.0, p_d), 0, rng);
    agree += outcome.bits_agree();
    ++total;
  }
  EXPECT_GT(static_cast<double>(agree) / total, 0.999);
}

TEST(Purify, MarginalsMatchEnumeration) {
  const SqueezedMode mode(2.0);
  const auto state = apply_displacement_correction(post_homodyne_state(2, mode, 0.0, 0.9), 1);
  const int q0[] = {0};
  const auto weights = outcome_weights(state, q0, q0);
  Rng rng(41);
  const int trials = 100000;
  int counts[4] = {};
  for (int i = 0; i < trials; ++i) {
    auto [outcome, post] = purify(state, 0, rng);
    ++counts[(outcome.bits_alice[0] << 1) | outcome.bits_bob[0]];
  }
  for (int c = 0; c < 4; ++c) {
    const double p = weights[c];
    EXPECT_NEAR(static_cast<double>(counts[c]) / trials, p, 3.0 * std::sqrt(p * (1 - p) / trials) + 1e-12);
  }
}

TEST(Judge, PairCounting) {
  TrialResult trial;
  trial.classified = true;
  trial.fidelity = 0.995;
  EXPECT_EQ(judge(trial, 2, 0.99).bell_pairs, 2);
  trial.extra_pair_fidelity = 0.992;
  EXPECT_EQ(judge(trial, 2, 0.99).bell_pairs, 3);
  trial.extra_pair_fidelity = 0.5;
  EXPECT_EQ(judge(trial, 2, 0.99).bell_pairs, 2);
  trial.fidelity = 0.9;
  EXPECT_FALSE(judge(trial, 2, 0.99).success);
  trial.classified = false;
  trial.fidelity = 1.0;
  EXPECT_FALSE(judge(trial, 2, 0.0).success);
}

TEST(RunTrial, Invariants) {
  ProtocolConfig config;
  config.n = 4;
  config.s_c = 1;
  config.sigma = sigma_from_db(14.0);
  Rng rng(55);
  for (int i = 0; i < 2000; ++i) {
    const auto r = run_trial(config, rng);
    EXPECT_TRUE(transcript_complete(r.transcript));
    EXPECT_GE(r.fidelity, 0.0);
    EXPECT_LE(r.fidelity, 1.0);
    if (r.abandoned) {
      EXPECT_FALSE(r.success);
      EXPECT_EQ(r.fidelity, 0.0);
      EXPECT_EQ(r.bell_pairs, 0);
      continue;
    }
    if (r.success) {
      EXPECT_TRUE(r.outcome.bits_agree());
      EXPECT_TRUE(r.bell_pairs == config.n_b() || r.bell_pairs == config.n_b() + 1);
    } else {
      EXPECT_EQ(r.bell_pairs, 0);
    }
    if (r.bell_pairs == config.n - config.s_c) EXPECT_EQ(r.t, 0);
    EXPECT_EQ(r.extra_pair_fidelity.has_value(), r.t == 0);
    EXPECT_EQ(r.boundary_t, std::llabs(r.t) == 8);
    const auto& tr = r.transcript;
    EXPECT_EQ(tr[2].x_d, r.x_d);
    EXPECT_EQ(tr[3].p_d, r.p_d);
  }
}

TEST(RunTrial, SameSeedSameResult) {
  ProtocolConfig config;
  config.n = 3;
  config.sigma = 5.0;
  Rng a(77), b(77);
  for (int i = 0; i < 50; ++i) {
    const auto ra = run_trial(config, a);
    const auto rb = run_trial(config, b);
    EXPECT_EQ(ra.p_d, rb.p_d);
    EXPECT_EQ(ra.fidelity, rb.fidelity);
    EXPECT_EQ(ra.outcome.bits_alice, rb.outcome.bits_alice);
  }
}

TEST(RunTrial, AntisqueezedNeverSucceeds) {
  ProtocolConfig config;
  config.sigma = 0.1;
  Rng rng(3);
  int successes = 0;
  for (int i = 0; i < 2000; ++i) successes += run_trial(config, rng).success;
  EXPECT_EQ(successes, 0);
}

// Zero-shift classified trials carry an extra pair at >= 0.99 fidelity
// whenever s_c satisfies the 2.2 cutoff design rule.
TEST(RunTrial, ZeroShiftExtraPairFidelityInDesignRegime) {
  struct Case {
    int n, s_c;
    double db;
  };
  for (const auto& c : {Case{2, 0, 20.0}, Case{3, 1, 15.0}, Case{4, 2, 12.0}}) {
    ProtocolConfig config;
    config.n = c.n;
    config.s_c = c.s_c;
    config.sigma = sigma_from_db(c.db);
    ASSERT_LE(analytic::min_sc(config.sigma, config.n_b(), analytic::kDesignCutoff), c.s_c);
    Rng rng(100 + c.n);
    int seen = 0;
    for (int i = 0; i < 20000; ++i) {
      const auto r = run_trial(config, rng);
      if (r.abandoned || r.t != 0 || !r.classified) continue;
      ++seen;
      EXPECT_GE(*r.extra_pair_fidelity, 0.99) << "n=" << c.n << " delta_p=" << r.delta_p;
    }
    EXPECT_GT(seen, 100);
  }
}

}  // namespace
}  // namespace cvdvswap
