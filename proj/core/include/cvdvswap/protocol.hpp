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
#include <optional>
#include <span>
#include <utility>

#include "cvdvswap/gaussian_modes.hpp"
#include "cvdvswap/register.hpp"
#include "cvdvswap/rng.hpp"
#include "cvdvswap/transcript.hpp"

namespace cvdvswap {

struct ProtocolConfig {
  int n = 2;                        // register size per party
  double sigma = 10.0;              // squeezing, linear units
  int s_c = 0;                      // extra purification qubits
  double fidelity_threshold = 0.99;
  int max_qubits = kDefaultMaxQubits;

  int n_b() const { return n - 1 - s_c; }

  /// Throws InvalidParameter unless n_b >= 1, s_c >= 0, sigma > 0,
  /// threshold in [0, 1] and n within the cap.
  void validate() const;
};

struct TrialResult {
  double x_d = 0.0;
  double p_d = 0.0;
  std::int64_t t = 0;
  double delta_p = 0.0;
  MeasurementOutcome outcome;  // qubit 0 first, then n - s_c ... n - 1
  bool abandoned = false;
  bool degenerate = false;     // abandoned because every amplitude underflowed
  bool boundary_t = false;     // |t| == 2^{n-1}; kept for audit
  bool classified = false;     // purification rules hold
  bool success = false;        // classified and fidelity clears the threshold
  double fidelity = 0.0;       // against bell_state(n_b); 0 when abandoned
  std::optional<double> extra_pair_fidelity;  // t == 0 only, against bell_state(n_b + 1)
  std::optional<std::int64_t> t_s;            // reduced shift after the s_c fine qubits
  int bell_pairs = 0;
  Transcript transcript;
};

/// Success verdict and pair count of a finished trial under an arbitrary threshold.
struct Verdict {
  bool success = false;
  int bell_pairs = 0;
};
Verdict judge(const TrialResult& trial, int n_b, double threshold);

/// Normalized state after Charlie's homodyne measurement:
///   a(j, k) ~ exp(-i x_D (xbar_j + xbar_k) / sqrt 2) hhat_{x_D}(p_D - (xbar_j - xbar_k) / sqrt 2).
/// Preparation, local entangling and the beam splitter are folded into this
/// closed form. Throws DegenerateOutcome when every amplitude underflows.
JointState post_homodyne_state(int n, const SqueezedMode& mode, double x_d, double p_d);

/// exp(i x_D / sqrt 2 * Xbar) on both registers.
JointState apply_phase_correction(JointState state, double x_d);

/// Alice applies D(-t): j -> (j - t) mod 2^n.
JointState apply_displacement_correction(JointState state, std::int64_t t);

/// Nested floor/ceil halving of t. `s_bits` is ordered (j_{n-s_c}, ..., j_{n-1});
/// the last bit is applied first. Bit 0 takes the floor, bit 1 the ceiling.
std::int64_t ts_reduce(std::int64_t t, std::span<const int> s_bits);

/// True iff t lies outside [-2^{n-1}, 2^{n-1}].
bool abandon_check(std::int64_t t, int n);

struct Purification {
  MeasurementOutcome outcome;  // qubit 0 first, then n - s_c ... n - 1
  JointState after_fine;       // after the s_c fine qubits only; n - s_c qubits per side
  JointState final_state;      // after qubit 0 as well; n_b qubits per side
};

/// Measures the fine qubits n - s_c ... n - 1 and then qubit 0 on both
/// sides. Sequential measurement has the same joint statistics as a single
/// joint measurement and exposes the intermediate state needed at t = 0.
Purification purify_staged(const JointState& state, int s_c, Rng& rng);

std::pair<MeasurementOutcome, JointState> purify(const JointState& state, int s_c, Rng& rng);

/// Both parties' measured bits agree, and qubit 0 is 0 with t in [0, 2^{n-1}]
/// or 1 with t in [-2^{n-1}, 0].
bool classify_success(std::int64_t t, const MeasurementOutcome& outcome, int n);

/// Runs one full protocol execution.
TrialResult run_trial(const ProtocolConfig& config, Rng& rng);

}  // namespace cvdvswap
