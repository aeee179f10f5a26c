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

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cvdvswap/errors.hpp"

namespace cvdvswap {

void ProtocolConfig::validate() const {
  if (n < 2 || n > max_qubits) {
    throw InvalidParameter("ProtocolConfig: n = " + std::to_string(n) + " outside [2, " +
                           std::to_string(max_qubits) + "]");
  }
  if (s_c < 0) throw InvalidParameter("ProtocolConfig: s_c must be nonnegative");
  if (n_b() < 1) {
    throw InvalidParameter("ProtocolConfig: n - 1 - s_c must leave at least one Bell pair");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("ProtocolConfig: sigma must be positive and finite");
  }
  if (!(fidelity_threshold >= 0.0 && fidelity_threshold <= 1.0)) {
    throw InvalidParameter("ProtocolConfig: fidelity threshold must lie in [0, 1]");
  }
}

Verdict judge(const TrialResult& trial, int n_b, double threshold) {
  if (trial.abandoned || !trial.classified) return {};
  if (trial.extra_pair_fidelity && *trial.extra_pair_fidelity >= threshold) {
    return {true, n_b + 1};
  }
  if (trial.fidelity >= threshold) return {true, n_b};
  return {};
}

JointState post_homodyne_state(int n, const SqueezedMode& mode, double x_d, double p_d) {
  const auto spec = RegisterSpec::make(n);
  const std::size_t dim = spec.dim();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

  // xbar_j - xbar_k = (j - k) delta, so h-hat only depends on d = j - k.
  std::vector<double> by_difference(2 * dim - 1);
  for (std::size_t i = 0; i < by_difference.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(dim - 1);
    by_difference[i] = mode.hhat(x_d, p_d - d * spec.delta * inv_sqrt2);
  }
  std::vector<Amplitude> phase(dim);
  for (std::size_t j = 0; j < dim; ++j) phase[j] = std::polar(1.0, -x_d * spec.xbar(j) * inv_sqrt2);

  JointState state(n);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      state(j, k) = phase[j] * phase[k] * by_difference[j + dim - 1 - k];
    }
  }
  const double norm2 = state.norm_squared();
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw DegenerateOutcome("post_homodyne_state: all amplitudes underflow at p_D = " +
                            std::to_string(p_d));
  }
  state.normalize();
  return state;
}

JointState apply_phase_correction(JointState state, double x_d) {
  const double theta = x_d / std::numbers::sqrt2;
  state = apply_xbar_phase(std::move(state), Side::Alice, theta);
  return apply_xbar_phase(std::move(state), Side::Bob, theta);
}

JointState apply_displacement_correction(JointState state, std::int64_t t) {
  return displace(std::move(state), Side::Alice, -t);
}

std::int64_t ts_reduce(std::int64_t t, std::span<const int> s_bits) {
  for (auto it = s_bits.rbegin(); it != s_bits.rend(); ++it) {
    const std::int64_t floor_half = t >= 0 ? t / 2 : -((-t + 1) / 2);
    const bool odd = (t % 2) != 0;
    t = (*it == 1 && odd) ? floor_half + 1 : floor_half;
  }
  return t;
}

bool abandon_check(std::int64_t t, int n) {
  const std::int64_t half = std::int64_t{1} << (n - 1);
  return t < -half || t > half;
}

Purification purify_staged(const JointState& state, int s_c, Rng& rng) {
  const int n = state.qubits();
  if (s_c < 0 || n - 1 - s_c < 1) {
    throw InvalidParameter("purify: s_c = " + std::to_string(s_c) + " leaves no Bell pair for n = " +
                           std::to_string(n));
  }
  std::vector<int> fine;
  for (int q = n - s_c; q < n; ++q) fine.push_back(q);

  Purification result;
  result.outcome.alice_qubits.push_back(0);
  result.outcome.bob_qubits.push_back(0);
  std::vector<int> fine_alice, fine_bob;
  if (s_c > 0) {
    auto [fine_outcome, reduced] = measure_qubits(state, fine, fine, rng);
    fine_alice = std::move(fine_outcome.bits_alice);
    fine_bob = std::move(fine_outcome.bits_bob);
    result.after_fine = std::move(reduced);
  } else {
    result.after_fine = state;
  }
  const int first[] = {0};
  auto [first_outcome, final_state] = measure_qubits(result.after_fine, first, first, rng);
  result.final_state = std::move(final_state);

  auto& out = result.outcome;
  out.bits_alice.push_back(first_outcome.bits_alice[0]);
  out.bits_bob.push_back(first_outcome.bits_bob[0]);
  out.alice_qubits.insert(out.alice_qubits.end(), fine.begin(), fine.end());
  out.bob_qubits.insert(out.bob_qubits.end(), fine.begin(), fine.end());
  out.bits_alice.insert(out.bits_alice.end(), fine_alice.begin(), fine_alice.end());
  out.bits_bob.insert(out.bits_bob.end(), fine_bob.begin(), fine_bob.end());
  return result;
}

std::pair<MeasurementOutcome, JointState> purify(const JointState& state, int s_c, Rng& rng) {
  auto staged = purify_staged(state, s_c, rng);
  return {std::move(staged.outcome), std::move(staged.final_state)};
}

bool classify_success(std::int64_t t, const MeasurementOutcome& outcome, int n) {
  if (!outcome.bits_agree()) return false;
  int first = -1;
  for (std::size_t i = 0; i < outcome.alice_qubits.size(); ++i) {
    if (outcome.alice_qubits[i] == 0) first = outcome.bits_alice[i];
  }
  if (first < 0) throw InvalidParameter("classify_success: qubit 0 was not measured");
  const std::int64_t half = std::int64_t{1} << (n - 1);
  if (first == 0) return t >= 0 && t <= half;
  return t <= 0 && t >= -half;
}

TrialResult run_trial(const ProtocolConfig& config, Rng& rng) {
  config.validate();
  const SqueezedMode mode(config.sigma);
  TrialResult result;

  // Alice and Bob each prepare |+>^n (x) g, entangle locally, and ship the mode.
  result.transcript.push_back(ClassicalMessage::dispatch(Party::Alice));
  result.transcript.push_back(ClassicalMessage::dispatch(Party::Bob));

  // Charlie: beam splitter, homodyne X on one port and P on the other.
  result.x_d = mode.sample_xd(rng);
  result.p_d = mode.sample_pd(config.n, rng);
  result.transcript.push_back(ClassicalMessage::homodyne(Party::Alice, result.x_d, result.p_d));
  result.transcript.push_back(ClassicalMessage::homodyne(Party::Bob, result.x_d, result.p_d));

  const auto decomposition = decompose_pd(result.p_d, config.n);
  result.t = decomposition.t;
  result.delta_p = decomposition.delta_p;
  const std::int64_t half = std::int64_t{1} << (config.n - 1);
  result.boundary_t = result.t == half || result.t == -half;
  if (abandon_check(result.t, config.n)) {
    result.abandoned = true;
    return result;
  }

  JointState state;
  try {
    state = post_homodyne_state(config.n, mode, result.x_d, result.p_d);
  } catch (const DegenerateOutcome&) {
    result.abandoned = true;
    result.degenerate = true;
    return result;
  }
  state = apply_phase_correction(std::move(state), result.x_d);
  state = apply_displacement_correction(std::move(state), result.t);

  auto purification = purify_staged(state, config.s_c, rng);
  result.outcome = std::move(purification.outcome);
  result.classified = classify_success(result.t, result.outcome, config.n);
  result.fidelity = fidelity_to_bell(purification.final_state, config.n_b());
  if (result.t == 0) {
    result.extra_pair_fidelity = fidelity_to_bell(purification.after_fine, config.n_b() + 1);
  }
  if (result.classified) {
    const std::span<const int> fine_bits(result.outcome.bits_alice.begin() + 1,
                                         result.outcome.bits_alice.end());
    result.t_s = ts_reduce(result.t, fine_bits);
  }
  const auto verdict = judge(result, config.n_b(), config.fidelity_threshold);
  result.success = verdict.success;
  result.bell_pairs = verdict.bell_pairs;
  return result;
}

}  // namespace cvdvswap
