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

#include "cvdvswap/register.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cvdvswap/errors.hpp"

namespace cvdvswap {
namespace {

void check_qubits(int n, int max_qubits, const char* what) {
  if (n < 1 || n > max_qubits) {
    throw InvalidParameter(std::string(what) + ": qubit count " + std::to_string(n) +
                           " outside [1, " + std::to_string(max_qubits) + "]");
  }
}

// A zero-qubit state is the scalar left after measuring every qubit.
void check_state_qubits(int n, int max_qubits) {
  if (n < 0 || n > max_qubits) {
    throw InvalidParameter("JointState: qubit count " + std::to_string(n) + " outside [0, " +
                           std::to_string(max_qubits) + "]");
  }
}

// exp(i * pi * num / den) with num reduced exactly modulo 2*den first.
Amplitude exp_i_pi_ratio(std::int64_t num, std::int64_t den) {
  const std::int64_t period = 2 * den;
  num %= period;
  if (num < 0) num += period;
  const double angle = std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

// In-place radix-2 transform y_k = sum_j exp(sign * i 2pi jk / N) x_j.
void fft_inplace(std::span<Amplitude> data, int sign) {
  const std::size_t size = data.size();
  for (std::size_t i = 1, j = 0; i < size; ++i) {
    std::size_t bit = size >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const auto den = static_cast<std::int64_t>(size);
  std::vector<Amplitude> twiddle(size / 2);
  for (std::size_t m = 0; m < size / 2; ++m) {
    twiddle[m] = exp_i_pi_ratio(sign * 2 * static_cast<std::int64_t>(m), den);
  }
  for (std::size_t len = 2; len <= size; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = size / len;
    for (std::size_t start = 0; start < size; start += len) {
      for (std::size_t m = 0; m < half; ++m) {
        const Amplitude w = twiddle[m * stride] * data[start + m + half];
        data[start + m + half] = data[start + m] - w;
        data[start + m] += w;
      }
    }
  }
}

// Centered QFT on a contiguous vector of length N = 2^n.
void centered_qft(std::span<Amplitude> v, bool inverse) {
  const auto size = static_cast<std::int64_t>(v.size());
  const std::int64_t sign = inverse ? -1 : 1;
  const std::int64_t odd = size - 1;  // 2c
  // Pre-twiddle exp(-s i pi (N-1) j / N).
  for (std::int64_t j = 0; j < size; ++j) {
    v[static_cast<std::size_t>(j)] *= exp_i_pi_ratio(-sign * odd * j, size);
  }
  fft_inplace(v, static_cast<int>(sign));
  // Post-twiddle exp(s i pi (N-1)(N-1-2k) / (2N)) / sqrt(N).
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  for (std::int64_t k = 0; k < size; ++k) {
    v[static_cast<std::size_t>(k)] *= scale * exp_i_pi_ratio(sign * odd * (odd - 2 * k), 2 * size);
  }
}

}  // namespace

double delta(int n, int max_qubits) {
  check_qubits(n, max_qubits, "delta");
  return std::sqrt(2.0 * std::numbers::pi / std::ldexp(1.0, n));
}

double xbar(int n, std::int64_t j, int max_qubits) {
  check_qubits(n, max_qubits, "xbar");
  const std::int64_t size = std::int64_t{1} << n;
  if (j < 0 || j >= size) {
    throw InvalidParameter("xbar: index " + std::to_string(j) + " outside [0, " +
                           std::to_string(size - 1) + "]");
  }
  return (static_cast<double>(j) - 0.5 * static_cast<double>(size - 1)) * delta(n, max_qubits);
}

RegisterSpec RegisterSpec::make(int n, int max_qubits) {
  return RegisterSpec{n, cvdvswap::delta(n, max_qubits)};
}

JointState::JointState(int n, int max_qubits) : n_(n) {
  check_state_qubits(n, max_qubits);
  amps_.assign(std::size_t{1} << (2 * n), Amplitude{});
}

JointState::JointState(int n, std::vector<Amplitude> amplitudes, int max_qubits)
    : n_(n), amps_(std::move(amplitudes)) {
  check_state_qubits(n, max_qubits);
  if (amps_.size() != (std::size_t{1} << (2 * n))) {
    throw InvalidParameter("JointState: amplitude table size " + std::to_string(amps_.size()) +
                           " does not match 2^(2n) for n = " + std::to_string(n));
  }
}

JointState JointState::basis(int n, std::size_t j, std::size_t k) {
  JointState s(n);
  if (j >= s.dim() || k >= s.dim()) throw InvalidParameter("JointState::basis: index out of range");
  s(j, k) = 1.0;
  return s;
}

double JointState::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amps_) total += std::norm(a);
  return total;
}

void JointState::normalize() {
  const double norm2 = norm_squared();
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
    throw ConsistencyError("JointState::normalize: zero or non-finite norm");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& a : amps_) a *= scale;
}

JointState qft_apply(JointState state, Side side, bool inverse) {
  const std::size_t dim = state.dim();
  auto amps = state.amplitudes();
  if (side == Side::Bob) {
    for (std::size_t j = 0; j < dim; ++j) centered_qft(amps.subspan(j * dim, dim), inverse);
    return state;
  }
  std::vector<Amplitude> column(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t j = 0; j < dim; ++j) column[j] = amps[j * dim + k];
    centered_qft(column, inverse);
    for (std::size_t j = 0; j < dim; ++j) amps[j * dim + k] = column[j];
  }
  return state;
}

JointState displace(JointState state, Side side, std::int64_t t) {
  const std::size_t dim = state.dim();
  const auto mod = static_cast<std::int64_t>(dim);
  const auto shift = static_cast<std::size_t>(((t % mod) + mod) % mod);
  if (shift == 0) return state;
  JointState out(state.qubits());
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = 0; k < dim; ++k) {
      if (side == Side::Alice) {
        out((j + shift) % dim, k) = state(j, k);
      } else {
        out(j, (k + shift) % dim) = state(j, k);
      }
    }
  }
  return out;
}

JointState apply_xbar_phase(JointState state, Side side, double theta) {
  const auto spec = RegisterSpec::make(state.qubits(), state.qubits());
  const std::size_t dim = state.dim();
  std::vector<Amplitude> phase(dim);
  for (std::size_t j = 0; j < dim; ++j) phase[j] = std::polar(1.0, theta * spec.xbar(j));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = 0; k < dim; ++k) state(j, k) *= side == Side::Alice ? phase[j] : phase[k];
  }
  return state;
}

JointState bell_state(int n_b, int max_qubits) {
  JointState s(n_b, max_qubits);
  const double amp = 1.0 / std::sqrt(std::ldexp(1.0, n_b));
  for (std::size_t j = 0; j < s.dim(); ++j) s(j, j) = amp;
  return s;
}

namespace {

void check_measured(const JointState& state, std::span<const int> alice, std::span<const int> bob) {
  if (alice.size() != bob.size()) {
    throw InvalidParameter("measure: Alice and Bob must measure the same number of qubits");
  }
  for (const auto list : {alice, bob}) {
    std::uint64_t seen = 0;
    for (int q : list) {
      if (q < 0 || q >= state.qubits()) throw InvalidParameter("measure: qubit index out of range");
      if (seen & (std::uint64_t{1} << q)) throw InvalidParameter("measure: repeated qubit index");
      seen |= std::uint64_t{1} << q;
    }
  }
}

// Per-index tables: pattern of the measured bits and compressed index of the rest.
struct SideTables {
  std::vector<std::uint32_t> pattern;
  std::vector<std::uint32_t> rest;
};

SideTables side_tables(int n, std::span<const int> measured) {
  const std::size_t dim = std::size_t{1} << n;
  std::vector<bool> is_measured(static_cast<std::size_t>(n), false);
  for (int q : measured) is_measured[static_cast<std::size_t>(q)] = true;
  SideTables t{std::vector<std::uint32_t>(dim), std::vector<std::uint32_t>(dim)};
  for (std::size_t j = 0; j < dim; ++j) {
    std::uint32_t pat = 0;
    for (int q : measured) pat = (pat << 1) | static_cast<std::uint32_t>(qubit_bit(j, q, n));
    std::uint32_t rest = 0;
    for (int q = 0; q < n; ++q) {
      if (!is_measured[static_cast<std::size_t>(q)]) {
        rest = (rest << 1) | static_cast<std::uint32_t>(qubit_bit(j, q, n));
      }
    }
    t.pattern[j] = pat;
    t.rest[j] = rest;
  }
  return t;
}

std::uint32_t bits_to_pattern(std::span<const int> bits) {
  std::uint32_t pat = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw InvalidParameter("project: bits must be 0 or 1");
    pat = (pat << 1) | static_cast<std::uint32_t>(b);
  }
  return pat;
}

}  // namespace

std::vector<double> outcome_weights(const JointState& state, std::span<const int> alice_qubits,
                                    std::span<const int> bob_qubits) {
  check_measured(state, alice_qubits, bob_qubits);
  const int n = state.qubits();
  const auto ta = side_tables(n, alice_qubits);
  const auto tb = side_tables(n, bob_qubits);
  const auto bob_width = static_cast<unsigned>(bob_qubits.size());
  std::vector<double> weights(std::size_t{1} << (alice_qubits.size() + bob_qubits.size()), 0.0);
  const std::size_t dim = state.dim();
  for (std::size_t j = 0; j < dim; ++j) {
    const std::size_t row = static_cast<std::size_t>(ta.pattern[j]) << bob_width;
    for (std::size_t k = 0; k < dim; ++k) weights[row | tb.pattern[k]] += std::norm(state(j, k));
  }
  return weights;
}

JointState project(const JointState& state, std::span<const int> alice_qubits,
                   std::span<const int> bob_qubits, std::span<const int> bits_alice,
                   std::span<const int> bits_bob) {
  check_measured(state, alice_qubits, bob_qubits);
  if (bits_alice.size() != alice_qubits.size() || bits_bob.size() != bob_qubits.size()) {
    throw InvalidParameter("project: bit list length does not match qubit list");
  }
  const int n = state.qubits();
  const int remaining = n - static_cast<int>(alice_qubits.size());
  const auto ta = side_tables(n, alice_qubits);
  const auto tb = side_tables(n, bob_qubits);
  const auto want_a = bits_to_pattern(bits_alice);
  const auto want_b = bits_to_pattern(bits_bob);
  JointState out(remaining, std::max(n, 1));
  const std::size_t dim = state.dim();
  for (std::size_t j = 0; j < dim; ++j) {
    if (ta.pattern[j] != want_a) continue;
    for (std::size_t k = 0; k < dim; ++k) {
      if (tb.pattern[k] == want_b) out(ta.rest[j], tb.rest[k]) = state(j, k);
    }
  }
  return out;
}

std::pair<MeasurementOutcome, JointState> measure_qubits(const JointState& state,
                                                         std::span<const int> alice_qubits,
                                                         std::span<const int> bob_qubits,
                                                         Rng& rng) {
  const auto weights = outcome_weights(state, alice_qubits, bob_qubits);
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ConsistencyError("measure_qubits: state has zero norm");
  }
  const double target = rng.uniform01() * total;
  std::size_t pick = weights.size() - 1;
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    if (target < running && weights[i] > 0.0) {
      pick = i;
      break;
    }
  }
  while (weights[pick] == 0.0 && pick > 0) --pick;

  MeasurementOutcome outcome;
  outcome.alice_qubits.assign(alice_qubits.begin(), alice_qubits.end());
  outcome.bob_qubits.assign(bob_qubits.begin(), bob_qubits.end());
  const std::size_t width = bob_qubits.size();
  for (std::size_t i = 0; i < alice_qubits.size(); ++i) {
    outcome.bits_alice.push_back(static_cast<int>((pick >> (width + alice_qubits.size() - 1 - i)) & 1U));
  }
  for (std::size_t i = 0; i < width; ++i) {
    outcome.bits_bob.push_back(static_cast<int>((pick >> (width - 1 - i)) & 1U));
  }
  auto post = project(state, alice_qubits, bob_qubits, outcome.bits_alice, outcome.bits_bob);
  post.normalize();
  return {std::move(outcome), std::move(post)};
}

double fidelity_to_bell(const JointState& state, int n_b) {
  if (state.qubits() != n_b) {
    throw InvalidParameter("fidelity_to_bell: state has " + std::to_string(state.qubits()) +
                           " qubits per side, target has " + std::to_string(n_b));
  }
  const double norm2 = state.norm_squared();
  if (!(norm2 > 0.0)) throw ConsistencyError("fidelity_to_bell: zero-norm state");
  Amplitude overlap{};
  for (std::size_t j = 0; j < state.dim(); ++j) overlap += state(j, j);
  const double f = std::norm(overlap) / (std::ldexp(1.0, n_b) * norm2);
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace cvdvswap
