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

#ifndef PARREP_STRATEGY_H
#define PARREP_STRATEGY_H

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parrep/games.h"
#include "parrep/matcore.h"
#include "parrep/prob.h"

namespace parrep {

/// Per-question measurement families. effects[q][a] is the effect for answer a
/// on question q. Checked at construction: every effect PSD (>= -1e-9) and
/// ||sum_a E - I||_F <= 1e-8 for every question.
class POVMFamily {
   public:
    POVMFamily(int dim, std::vector<std::vector<CMatrix>> effects);

    int dim() const {
        return dim_;
    }
    std::size_t num_questions() const {
        return effects_.size();
    }
    std::size_t num_answers() const {
        return effects_.empty() ? 0 : effects_[0].size();
    }
    const CMatrix &effect(std::size_t q, std::size_t a) const {
        return effects_[q][a];
    }
    const std::vector<CMatrix> &outcomes(std::size_t q) const {
        return effects_[q];
    }
    const std::vector<std::vector<CMatrix>> &effects() const {
        return effects_;
    }

    /// u E u^dagger for every effect.
    POVMFamily conjugated(const CMatrix &u) const;

   private:
    int dim_;
    std::vector<std::vector<CMatrix>> effects_;
};

class EntangledStrategy {
   public:
    EntangledStrategy(int n, PureState psi, POVMFamily alice, POVMFamily bob);

    int n() const {
        return n_;
    }
    int d() const {
        return alice_.dim();
    }
    const PureState &psi() const {
        return psi_;
    }
    const POVMFamily &alice() const {
        return alice_;
    }
    const POVMFamily &bob() const {
        return bob_;
    }
    /// psi as a d x d coefficient matrix (row index = Alice).
    CMatrix psi_matrix() const {
        return unflatten(psi_.amplitudes(), d(), d());
    }
    /// Columns u_k with psi = sum_k s_k u_k (x) u_k, set by symmetrize().
    const std::optional<CMatrix> &symmetric_basis() const {
        return basis_;
    }
    void set_symmetric_basis(CMatrix basis) {
        basis_ = std::move(basis);
    }

   private:
    int n_;
    PureState psi_;
    POVMFamily alice_;
    POVMFamily bob_;
    std::optional<CMatrix> basis_;
};

/// Answer functions on question tuples; alice[x] is an answer tuple index.
struct DeterministicStrategy {
    int n = 1;
    std::vector<std::size_t> alice;
    std::vector<std::size_t> bob;

    /// Embedding with d = 1 and 0/1 scalar effects.
    EntangledStrategy to_entangled(const Game &g) const;
};

/// Throws std::invalid_argument unless the index spaces match G^n.
void check_compatible(const Game &g, int n, const EntangledStrategy &s);
void check_compatible(const Game &g, int n, const DeterministicStrategy &s);

/// Rotates Bob's side so that psi = sum_k s_k u_k (x) u_k in the Schmidt basis
/// {u_k} of Alice; Bob's effects are conjugated by the same rotation.
EntangledStrategy symmetrize(const EntangledStrategy &s);

/// <psi| A (x) B |psi> for psi given as a d x d coefficient matrix.
double born_probability(const CMatrix &psi_mat, const CMatrix &a, const CMatrix &b);

/// Conditional answer table P(a, b | x, y), row-major over (a, b) tuples.
std::vector<double> answer_table(const EntangledStrategy &s, std::size_t x, std::size_t y);

/// Exact joint over (X1..Xn, Y1..Yn, A1..An, B1..Bn).
FiniteDistribution born_joint(const Game &g, int n, const EntangledStrategy &s);

double win_probability(const Game &g, int n, const EntangledStrategy &s);
double win_probability(const Game &g, int n, const DeterministicStrategy &s);

// Fixtures.
/// P_a(theta) = (I + (-1)^a (cos(theta) Z + sin(theta) X)) / 2.
CMatrix qubit_projector(double theta, int a);
/// Product of n optimal CHSH strategies on n Bell pairs (d = 2^n).
EntangledStrategy tsirelson(int n);
/// Like tsirelson(n), but each player's coordinate-j angle is shifted by
/// kappa times the parity of that player's other questions.
EntangledStrategy printing(int n, double kappa = 0.6283185307179586);
/// Product of a best single-round deterministic strategy for g.
DeterministicStrategy detprod(const Game &g, int n);
/// Looks up "tsirelson", "printing" or "detprod" (binary-question games only
/// for the first two).
EntangledStrategy strategy_fixture(std::string_view name, const Game &g, int n);

/// Tensor product of single-round strategies, coordinate 0 first.
EntangledStrategy product_strategy(const std::vector<EntangledStrategy> &rounds);

/// Random projective strategy of local dimension d for G^n.
EntangledStrategy random_strategy(Rng &rng, const Game &g, int n, int d);

// Strategy file format (JSON text):
//   {"d": d, "n": n, "psi": [re, im, ...],
//    "alice": [[flattened effect as re, im, ... row-major] per answer] per question,
//    "bob": same}
std::string strategy_to_text(const EntangledStrategy &s);
EntangledStrategy strategy_from_text(std::string_view text);
EntangledStrategy load_strategy(const std::string &path);
void save_strategy(const EntangledStrategy &s, const std::string &path);

}  // namespace parrep

#endif
