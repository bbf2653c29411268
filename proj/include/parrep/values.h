// Copyright 2026 The parrep Authors
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

#ifndef PARREP_VALUES_H
#define PARREP_VALUES_H

#include <cstdint>
#include <vector>

#include "parrep/games.h"
#include "parrep/strategy.h"

namespace parrep {

/// Upper limit on the number of deterministic strategy pairs enumerated.
inline constexpr double kMaxClassicalStrategies = 1e8;

struct ClassicalResult {
    double value;
    DeterministicStrategy strategy;
};

/// Exact best deterministic strategy for G^n. Alice's answer functions are
/// enumerated; Bob plays the exact best response. Throws std::length_error
/// when |A^n|^|X^n| * |B^n|^|Y^n| exceeds kMaxClassicalStrategies.
ClassicalResult classical_optimum(const Game &g, int n);
double classical_value(const Game &g, int n);

/// sum_{x,y} mu(x,y) sum_{V(x,y,a,b)=1} A_x^a (x) B_y^b for a single round.
CMatrix bell_operator(const Game &g, const POVMFamily &alice, const POVMFamily &bob);

struct SeesawConfig {
    int d = 2;
    int max_iters = 500;
    std::uint64_t seed = 1;
    double convergence_tol = 1e-12;
};

struct SeesawResult {
    double value;
    EntangledStrategy strategy;
    int iterations;
    bool converged;
    /// Objective after every half-step (Alice update, Bob update, state update).
    std::vector<double> trace;
};

/// Alternating optimization of a single-round strategy. Throws
/// std::logic_error if the objective ever decreases by more than 1e-10.
SeesawResult seesaw(const Game &g, const SeesawConfig &cfg);

struct BoundReport {
    double epsilon;
    double s_bits;
    double n;
    double c;
    double raw;
    double bound_value;
    bool vacuous;
};

enum class LogBase { kTwo, kNatural };

/// min(1, c s log(n) / (eps^17 n^(1/4))). n is a double so grids up to 2^60
/// and beyond are representable.
BoundReport theorem1_bound(double epsilon, double s_bits, double n, double c = 1.0, LogBase base = LogBase::kTwo);

}  // namespace parrep

#endif
