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

#ifndef PARREP_DEPBREAK_H
#define PARREP_DEPBREAK_H

#include <string>
#include <vector>

#include "parrep/games.h"
#include "parrep/matcore.h"
#include "parrep/prob.h"
#include "parrep/strategy.h"

namespace parrep {

/// Relative singular value cutoff used for S^+ and T^+. Coarse operators are
/// sums of many effects, so their roundoff null space sits near 1e-16 in
/// eigenvalue, i.e. 1e-8 in singular value of S.
inline constexpr double kAlignedPinvTol = 1e-7;

/// Coordinates split into the conditioned set C and the rest (both sorted,
/// 0-based). Reports print coordinates 1-based.
struct CoordinateSplit {
    int n = 0;
    std::vector<int> C;
    std::vector<int> rest;

    static CoordinateSplit make(int n, std::vector<int> C);
    int m() const {
        return static_cast<int>(rest.size());
    }
    /// Position of coordinate i inside `rest`, or -1.
    int rest_pos(int i) const;
};

enum class Player { kAlice = 0, kBob = 1 };

/// omega_{-i}: a direction and label for each coordinate of `rest` (the entry
/// at coordinate i is ignored) plus the C-question tuples.
struct OmegaMinus {
    std::vector<int> dir;    // Player per rest position
    std::vector<int> label;  // fixed question of that player
    std::size_t xc = 0;      // X_C tuple, C order, first most significant
    std::size_t yc = 0;
    double prob = 0.0;       // P(Omega_{-i} = omega_{-i})
};

/// Names of the extended-joint variables for coordinate k (0-based).
std::string d_name(int k);
std::string m_name(int k);

/// Exact joint over (D_j, M_j for j in rest, X1..Xn, Y1..Yn, A1..An, B1..Bn).
/// M_j takes labels in [0, max(|X|, |Y|)).
FiniteDistribution extended_joint(const Game &g, int n, const EntangledStrategy &s, const CoordinateSplit &split);

/// All omega_{-i} with positive probability, in lexicographic order.
std::vector<OmegaMinus> enumerate_omega_minus(const Game &g, const CoordinateSplit &split, int i);

/// What Omega_i fixes in a coarse operator: Alice's question x_i or Bob's y_i.
struct OmegaI {
    Player dir;
    int label;
};

/// Coarse (and fine) operators sum_x P(x | omega_{-i}, omega_i) sum_{a | a_C, a_i} A_x^a,
/// indexed [a_C][a_i]. Passing i = -1 (C-only coarse family) gives one a_i slot.
/// Throws ZeroProbabilityEvent when a conditional question law is undefined.
std::vector<std::vector<CMatrix>> coarse_family(const Game &g, const EntangledStrategy &s, const CoordinateSplit &split,
                                                int i, const OmegaMinus &w, OmegaI wi, Player side);
/// Sums the fine index out of coarse_family.
std::vector<CMatrix> coarse_povm(const Game &g, const EntangledStrategy &s, const CoordinateSplit &split, int i,
                                 const OmegaMinus &w, OmegaI wi, Player side);

struct AlignedOperators {
    CMatrix S;
    CMatrix U;
};

/// S = U A^{1/2} with U = polar_psd_factor(A^{1/2} sqrt(rho)).
AlignedOperators aligned_operators(const CMatrix &coarse, const CMatrix &rho);

/// (S^+)^dagger F_a S^+ for each fine effect, plus a final null outcome
/// completing the family to I. Throws std::invalid_argument when sum_a F_a
/// differs from S^dagger S by more than 1e-8.
std::vector<CMatrix> fine_povm(const CMatrix &S, const std::vector<CMatrix> &fine);

struct DepState {
    bool present = false;
    double weight = 0.0;
    CVector psi;  // normalized when present
};

/// (S (x) T)|psi> / ||.||; absent when the weight is at most 1e-12.
DepState dep_state(const CMatrix &S, const CMatrix &T, const PureState &psi);

/// One (omega_{-i}, x_i, y_i, a_C, b_C) cell of the bundle.
struct BundleEntry {
    bool context_live = false;  // mu(x_i, y_i) > 0
    DepState state;             // Psi_{r_{-i}, x_i, y_i}
    DepState state_x;           // omega_i = (Alice, x_i)
    DepState state_y;           // omega_i = (Bob, y_i)
    std::vector<CMatrix> alice_fine;  // |A| outcomes then the null outcome
    std::vector<CMatrix> bob_fine;
};

struct CoordinateBundle {
    int i = 0;
    std::vector<OmegaMinus> omegas;
    std::vector<BundleEntry> entries;  // [w][x_i][y_i][a_C][b_C] row-major
};

struct DepBreakBundle {
    Game game;
    int n = 0;
    CoordinateSplit split;
    EntangledStrategy strategy;  // symmetrized
    CMatrix rho;                 // reduced state of the symmetric psi
    std::size_t num_ac = 1;
    std::size_t num_bc = 1;
    std::vector<CoordinateBundle> coords;  // one per coordinate of rest
    double max_coarse_completeness = 0.0;  // max ||sum_aC A - I||_F seen
    double max_alignment_defect = 0.0;     // max ||S^dag S - A||_F and S sqrt(rho) non-PSD part
    double max_fine_null = 0.0;            // null outcome weight on Psi

    std::size_t entry_index(std::size_t w, int xi, int yi, std::size_t ac, std::size_t bc) const;
    const BundleEntry &entry(int pos, std::size_t w, int xi, int yi, std::size_t ac, std::size_t bc) const {
        return coords[pos].entries[entry_index(w, xi, yi, ac, bc)];
    }
};

/// Builds every Psi_{r_{-i},x_i,y_i} with its fine measurements. The strategy
/// is symmetrized first; correlations are unchanged.
DepBreakBundle build_bundle(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C);

/// A_C tuple digit extraction: digits of an answer tuple at coordinates C.
std::size_t sub_tuple(std::size_t tuple, const std::vector<int> &coords, int n, int base);

struct ContextResidual {
    int i;
    std::size_t w;
    int xi, yi;
    std::size_t ac, bc;
    double weight;
    double oracle_weight;
    double residual;  // max over (a_i, b_i)
};

struct UsefulnessReport {
    double max_residual = 0.0;         // usefulness equality
    double max_weight_residual = 0.0;  // dep_state weight vs brute-force conditional
    double max_weight_sum_defect = 0.0;
    double max_null_weight = 0.0;
    std::size_t contexts = 0;
    std::size_t absent_states = 0;
    std::vector<ContextResidual> rows;
};

/// Compares Tr(A^ (x) B^ Psi) with P(a_i, b_i | r_{-i}, x_i, y_i) and the
/// state weights with P(a_C, b_C | omega_{-i}, x_i, y_i), both read off the
/// extended joint by marginalization.
UsefulnessReport usefulness_check(const DepBreakBundle &bundle, const FiniteDistribution &joint);

struct SkewReport {
    std::vector<int> coords;             // 0-based coordinates of rest
    std::vector<double> item1, item2, item3;
    double avg1 = 0, avg2 = 0, avg3 = 0;
    double p_wc = 0;
    double delta = 0;
    double ratio1 = 0, ratio2 = 0, ratio3 = 0;  // avg / sqrt(delta)
};

double skew_delta(const Game &g, const CoordinateSplit &split, double p_wc);

/// The three distances of the classical skew lemma (total variation, i.e.
/// half the l1 norm), per coordinate of rest.
SkewReport skew_distances(const Game &g, const FiniteDistribution &joint, const CoordinateSplit &split);

struct SampleabilityReport {
    std::vector<int> coords;
    std::vector<double> d_bob, d_alice, d_cross;
    double avg_bob = 0, avg_alice = 0, avg_cross = 0;
    double max_triangle_excess = 0;  // max of d_cross - d_alice - d_bob per context
    double skipped_mass = 0;         // conditional mass on contexts with an absent variant state
    std::size_t skipped_contexts = 0;
    std::size_t skipped_questions = 0;  // (i, x_i, y_i) with P(W_C | x_i, y_i) = 0
};

/// E_i E_{x_i y_i ~ mu} E_{R_{-i} | x_i, y_i, W_C} of ||Psi_xy - Psi_y||,
/// ||Psi_xy - Psi_x|| and ||Psi_y - Psi_x||.
SampleabilityReport sampleability_distances(const DepBreakBundle &bundle);

struct XiReport {
    double avg_mi = 0;
    double delta = 0;
    double answer_term = 0;  // |C| log2|A| / m
    double p_wc = 0;
    std::vector<double> per_coord;
    bool ok = false;
};

/// E_{Omega, A_C} E_i I(X_i ; E_B | omega, a_C) of the unconditioned xi state.
XiReport xi_raz_check(const Game &g, int n, const EntangledStrategy &s, const std::vector<int> &C);

struct SubsetScore {
    std::vector<int> C;
    double p_wc;
    double score;
};

struct ChooseCResult {
    std::vector<int> C;
    double score = 0;
    bool threshold_met = false;
    std::vector<SubsetScore> table;
};

/// Exhaustive search over C with |C| <= t_max (and C != [n]) maximizing
/// E_{i notin C} P(W_i | W_C). Ties within 1e-12 keep the smaller, then
/// lexicographically first, subset. `joint` is the born_joint table.
ChooseCResult choose_C(const FiniteDistribution &joint, const Game &g, int n, double eps, int t_max);

/// P(W_i | W_C) for every coordinate i not in C, from the born_joint table.
std::vector<double> conditional_win_rates(const FiniteDistribution &joint, const Game &g, int n,
                                          const std::vector<int> &C, double *p_wc = nullptr);

/// "D2=A:0;xC=1;yC=0" style label (1-based coordinates).
std::string omega_label(const CoordinateSplit &split, int i, const OmegaMinus &w);

/// CSV with columns i,omega,aC,bC,xi,yi,weight,residual.
std::string bundle_csv(const DepBreakBundle &bundle, const UsefulnessReport &rep);

}  // namespace parrep

#endif
