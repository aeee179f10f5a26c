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
#include <string>
#include <vector>

namespace cvdvswap::cli {

struct VerifyOptions {
  bool quick = false;
  std::uint64_t trials = 0;  // 0: 100000, or 20000 with quick
  std::uint64_t seed = 1;
  unsigned threads = 1;
  int quad_points = 161;
  double u_scale = 1.0;  // != 1 perturbs the quadrature oracle's mode function
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suite plus the Monte Carlo / quadrature / closed-form triangle
/// for registers of at most three qubits.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

}  // namespace cvdvswap::cli
