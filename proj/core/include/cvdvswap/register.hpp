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

// Discrete-variable register algebra. An n-qubit register is treated as a
// discretized quadrature mode: computational basis state |j> is the X-bar
// eigenvector with eigenvalue (j - (2^n - 1)/2) * delta, and the centered QFT
// rotates X-bar into P-bar.
//
// Bit order: qubit 0 is the most significant bit of j. Every index
// computation in the library goes through qubit_bit() so the convention lives
// in one place.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cvdvswap/rng.hpp"

namespace cvdvswap {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 12;

enum class Side { Alice, Bob };

/// Value of qubit `q` in the n-qubit basis index `j`.
constexpr int qubit_bit(std::size_t j, int q, int n) {
  return static_cast<int>((j >> (n - 1 - q)) & 1U);
}

/// Discretization interval sqrt(2*pi / 2^n).
double delta(int n, int max_qubits = kDefaultMaxQubits);

/// Eigenvalue of X-bar on |j>: (j - (2^n - 1)/2) * delta(n).
double xbar(int n, std::int64_t j, int max_qubits = kDefaultMaxQubits);

struct RegisterSpec {
  int n = 1;
  double delta = 0.0;

  static RegisterSpec make(int n, int max_qubits = kDefaultMaxQubits);

  std::size_t dim() const { return std::size_t{1} << n; }
  double xbar(std::size_t j) const {
    return (static_cast<double>(j) - 0.5 * static_cast<double>(dim() - 1)) * delta;
  }
};

/// Amplitude table over Alice (x) Bob, both registers n qubits wide.
/// Storage is row-major in Alice's index: amplitude(j, k) lives at j * 2^n + k.
/// n = 0 is allowed and holds a single scalar (every qubit measured).
class JointState {
 public:
  JointState() = default;
  explicit JointState(int n, int max_qubits = kDefaultMaxQubits);
  JointState(int n, std::vector<Amplitude> amplitudes, int max_qubits = kDefaultMaxQubits);

  static JointState basis(int n, std::size_t j, std::size_t k);

  int qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  std::size_t size() const { return amps_.size(); }

  Amplitude& operator()(std::size_t j, std::size_t k) { return amps_[j * dim() + k]; }
  const Amplitude& operator()(std::size_t j, std::size_t k) const { return amps_[j * dim() + k]; }

  std::span<Amplitude> amplitudes() { return amps_; }
  std::span<const Amplitude> amplitudes() const { return amps_; }

  double norm_squared() const;

  /// Scales to unit norm. Throws ConsistencyError on a zero or non-finite norm.
  void normalize();

 private:
  int n_ = 0;
  std::vector<Amplitude> amps_;
};

/// Centered QFT (or its adjoint) on one register. Radix-2 FFT wrapped in the
/// index-offset phase twiddles, so the result equals the dense matrix
///   F[k][j] = 2^{-n/2} exp(i 2pi/2^n (j - c)(k - c)),  c = (2^n - 1)/2.
JointState qft_apply(JointState state, Side side, bool inverse = false);

/// Cyclic shift |j> -> |(j + t) mod 2^n> on one register.
JointState displace(JointState state, Side side, std::int64_t t);

/// Multiplies amplitude(j, .) (Alice) or amplitude(., k) (Bob) by exp(i theta xbar).
JointState apply_xbar_phase(JointState state, Side side, double theta);

/// n_b shared Bell pairs: 2^{-n_b/2} sum_j |j, j>.
JointState bell_state(int n_b, int max_qubits = kDefaultMaxQubits);

struct MeasurementOutcome {
  std::vector<int> alice_qubits;
  std::vector<int> bob_qubits;
  std::vector<int> bits_alice;
  std::vector<int> bits_bob;

  bool bits_agree() const { return bits_alice == bits_bob; }
};

/// Born-rule weight of every joint bit pattern of the listed qubits.
/// Pattern index: Alice's bits (list order, first = most significant) followed
/// by Bob's bits. Weights are unnormalized when the state is.
std::vector<double> outcome_weights(const JointState& state, std::span<const int> alice_qubits,
                                    std::span<const int> bob_qubits);

/// Unnormalized projection onto the given bits, restricted to the unmeasured
/// qubits (kept in their original order on each side).
JointState project(const JointState& state, std::span<const int> alice_qubits,
                   std::span<const int> bob_qubits, std::span<const int> bits_alice,
                   std::span<const int> bits_bob);

/// Samples a measurement of the listed qubits and returns the renormalized
/// state on the remaining qubits. Both lists must have the same length.
std::pair<MeasurementOutcome, JointState> measure_qubits(const JointState& state,
                                                         std::span<const int> alice_qubits,
                                                         std::span<const int> bob_qubits,
                                                         Rng& rng);

/// |<state|bell_state(n_b)>|^2 for a state of n_b qubits per side.
double fidelity_to_bell(const JointState& state, int n_b);

}  // namespace cvdvswap
