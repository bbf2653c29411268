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

#ifndef PARREP_VERIFY_H
#define PARREP_VERIFY_H

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "parrep/games.h"
#include "parrep/reduction.h"
#include "parrep/strategy.h"

namespace parrep {

/// One asserted (or informational) number.
struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    std::string relation;  // "<=", ">=", "==", "info"
    bool pass = true;
};

struct SuiteReport {
    std::string suite;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> metrics;
    double seconds = 0.0;

    void expect_le(const std::string &name, double value, double bound);
    void expect_ge(const std::string &name, double value, double bound);
    void expect_true(const std::string &name, bool ok, double value = 0.0);
    void info(const std::string &name, double value);
    void metric(const std::string &name, double value);

    bool passed() const;
    std::size_t failures() const;
    /// First failing check or empty.
    std::string first_failure() const;
    std::string to_json() const;
};

/// Names accepted by run_suite.
const std::vector<std::string> &suite_names();

// Random property sweeps.
SuiteReport verify_matcore(std::uint64_t seed, int trials);
SuiteReport verify_infotheory(std::uint64_t seed, int trials, int raz_trials = 500);

// Depbreak suites on a (game, strategy, n, C) instance; C is 0-based.
SuiteReport verify_usefulness(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C);
SuiteReport verify_skew(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C);
SuiteReport verify_sampleability(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C);
SuiteReport verify_xi(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C);

/// Classical enumeration and seesaw over `seeds` seeds (starting at `seed`).
SuiteReport verify_values(const Game &g, std::uint64_t seed, int seeds = 10, int max_iters = 500);

/// Classical correlated sampling over `trials` seeded runs.
SuiteReport verify_corrsamp(std::uint64_t seed, int trials = 100000);
/// Embezzlement and the reference quantum correlated sampling construction.
SuiteReport verify_qcs(std::uint64_t seed);

SuiteReport verify_reduction(const ReductionConfig &cfg);
SuiteReport verify_bound(double eps, double s_bits, const std::vector<double> &n_grid);

}  // namespace parrep

#endif
