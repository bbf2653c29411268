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

#ifndef PARREP_REDUCTION_H
#define PARREP_REDUCTION_H

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "parrep/corrsamp.h"
#include "parrep/depbreak.h"

namespace parrep {

enum class ClassicalMode { kExactConditional, kHolenstein, kJoint };
enum class QuantumMode { kOracleState, kEmbezzle };

std::string to_string(ClassicalMode m);
std::string to_string(QuantumMode m);
ClassicalMode parse_classical_mode(const std::string &s);
QuantumMode parse_quantum_mode(const std::string &s);

struct ReductionConfig {
    Game game;
    int n = 1;
    EntangledStrategy strategy;
    std::string strategy_id = "custom";
    std::vector<int> C;  // 0-based
    bool auto_C = false;
    double eps = 0.25;
    ClassicalMode classical = ClassicalMode::kExactConditional;
    QuantumMode quantum = QuantumMode::kOracleState;
    std::size_t d_prime = std::size_t{1} << 16;
    double alpha = 0.01;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    int workers = 1;

    ReductionConfig(Game g, int n_, EntangledStrategy s) : game(std::move(g)), n(n_), strategy(std::move(s)) {
    }
    /// Fully exact: exact conditional sampling and the ideal state.
    bool fully_exact() const {
        return classical == ClassicalMode::kExactConditional && quantum == QuantumMode::kOracleState;
    }
};

struct TrialOutcome {
    int pos = 0;  // position of i in rest
    int x = 0, y = 0, a = 0, b = 0;
    bool win = false;
    bool agreed = true;
    bool sampling_failed = false;
    bool state_absent = false;  // chosen context has no state to prepare
    double emb_err = 0.0;
    bool has_emb_err = false;
};

/// The single-shot strategy built from a repeated-game strategy: sample i,
/// sample r_{-i}, prepare Psi_{r_{-i}, x_i, y_i}, measure the fine POVMs.
class SingleShotStrategy {
   public:
    explicit SingleShotStrategy(const ReductionConfig &cfg);

    const DepBreakBundle &bundle() const {
        return bundle_;
    }
    const ReductionConfig &config() const {
        return cfg_;
    }
    const std::vector<int> &C() const {
        return bundle_.split.C;
    }

    /// One round on questions (x, y); trial_id seeds all randomness.
    TrialOutcome play(int x, int y, std::uint64_t trial_id) const;

    /// Closed-form P~(W_i) for rest position pos (exact conditional, ideal state).
    double exact_win(int pos) const;

    /// r-laws for rest position pos; empty when undefined (P(W_C | .) = 0).
    const std::vector<double> &joint_law(int pos, int x, int y) const;
    const std::vector<double> &alice_law(int pos, int x) const;
    const std::vector<double> &bob_law(int pos, int y) const;
    std::size_t r_size(int pos) const;

    /// E_{x,y ~ mu} TV(P(r | x_i, W_C), P(r | x_i, y_i, W_C)) averaged with Bob's side, per position.
    double law_skew(int pos) const;

   private:
    struct Decoded {
        std::size_t w, ac, bc;
    };
    Decoded decode(int pos, std::size_t r) const;
    std::vector<double> answer_distribution(int pos, int x, int y, std::size_t ra, std::size_t rb, double *err,
                                            bool *absent) const;

    ReductionConfig cfg_;
    DepBreakBundle bundle_;
    std::vector<std::vector<std::vector<double>>> joint_;  // [pos][x*Y+y][r]
    std::vector<std::vector<std::vector<double>>> alice_;  // [pos][x][r]
    std::vector<std::vector<std::vector<double>>> bob_;    // [pos][y][r]

    using Key = std::tuple<int, int, int, std::size_t, std::size_t>;
    mutable std::mutex mu_;
    mutable std::map<Key, std::pair<std::vector<double>, double>> dist_cache_;
    mutable std::map<std::tuple<int, int, std::size_t, int>, std::shared_ptr<AlignmentIsometry>> iso_cache_;
};

struct CoordinateResult {
    int coord = 0;  // 0-based
    double p_tilde = 0.0;
    double p_tilde_stderr = 0.0;
    double p_cond = 0.0;        // P(W_i | W_C)
    double residual = 0.0;      // |p_tilde - p_cond|
    double question_skew = 0.0;  // sum (mu - P(x_i, y_i | W_C)) P(W_i | x_i, y_i, W_C)
    double oracle_p_tilde = 0.0;  // brute-force closed form from the joint table
    double law_skew = 0.0;
    std::uint64_t trials = 0;
};

struct ReductionReport {
    std::string game;
    std::string strategy_id;
    int n = 0;
    std::vector<int> C;
    std::string mode_classical, mode_quantum;
    std::size_t d_prime = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int workers = 1;
    double eps = 0.0;
    bool exact = false;

    double p_wc = 0.0;
    std::vector<CoordinateResult> coords;
    double avg_p_tilde = 0.0;
    double avg_p_cond = 0.0;
    double avg_residual = 0.0;
    double avg_question_skew = 0.0;
    double corrected_residual = 0.0;  // |avg_p_tilde - avg_question_skew - avg_p_cond|
    double max_oracle_gap = 0.0;      // exact mode: max |p_tilde - oracle_p_tilde|
    double stderr_ = 0.0;
    std::uint64_t sampling_failures = 0;
    std::uint64_t disagreements = 0;
    std::uint64_t absent_states = 0;
    double disagreement_rate = 0.0;
    double failure_rate = 0.0;
    double absent_rate = 0.0;
    double avg_law_skew = 0.0;
    double emb_err_mean = 0.0;
    double emb_err_max = 0.0;
    std::uint64_t emb_err_count = 0;
    double error_budget = 0.0;
    bool threshold_met = false;  // avg_p_cond >= 1 - eps/2
    double runtime_seconds = 0.0;

    std::string to_json() const;
    std::string to_csv() const;
};

SingleShotStrategy build_single_shot(const ReductionConfig &cfg);
ReductionReport run_reduction(const ReductionConfig &cfg);

struct BoundCompare {
    bool pass_threshold = false;
    double margin = 0.0;  // avg_p_tilde - avg_p_cond
    double budget = 0.0;
    bool within_eps_quarter = false;  // margin >= -eps/4
};

/// Passes when avg_p_tilde >= avg_p_cond - budget (1e-8 in fully exact mode).
BoundCompare main_bound_compare(const ReductionReport &report, double eps);

}  // namespace parrep

#endif
