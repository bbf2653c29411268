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

#ifndef PARREP_INFOTHEORY_H
#define PARREP_INFOTHEORY_H

#include <limits>
#include <span>
#include <vector>

#include "parrep/matcore.h"
#include "parrep/prob.h"

namespace parrep {

// All entropies are in bits. Support violations give +infinity; IEEE
// arithmetic saturates and two infinities compare equal.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Eigenvalues of sigma at or below this count as its kernel.
inline constexpr double kKernelEig = 1e-12;
/// Mass of rho on the kernel of sigma above this is a support violation.
inline constexpr double kSupportTol = 1e-10;

double shannon_entropy(std::span<const double> p);
double von_neumann_entropy(const CMatrix &rho);
/// Classical KL divergence in bits.
double kl_divergence(std::span<const double> p, std::span<const double> q);

double relative_entropy(const DensityMatrix &rho, const DensityMatrix &sigma);
/// log2 of the smallest 2^lambda with rho <= 2^lambda sigma.
double relative_min_entropy(const DensityMatrix &rho, const DensityMatrix &sigma);

/// I(A:B) for a state on C^dim_a (x) C^dim_b.
double mutual_information(const DensityMatrix &rho_ab, int dim_a, int dim_b);

/// Holevo quantity S(sum p_x rho_x) - sum p_x S(rho_x) of normalized blocks.
double holevo_quantity(std::span<const double> weights, std::span<const CMatrix> blocks);

/// Classical on `classical` (row-major), quantum on a dim-dimensional register.
class CQState {
   public:
    /// blocks[k] is normalized; entries with zero weight may hold any density.
    CQState(FiniteDistribution classical, std::vector<CMatrix> blocks);
    /// Accepts unnormalized blocks p_k rho_k; the weights are their traces.
    static CQState from_unnormalized(std::vector<Variable> variables, const std::vector<CMatrix> &blocks);

    const FiniteDistribution &classical() const {
        return classical_;
    }
    const std::vector<CMatrix> &blocks() const {
        return blocks_;
    }
    int dim() const {
        return dim_;
    }
    /// Dense block-diagonal matrix sum_k p_k |k><k| (x) rho_k.
    DensityMatrix to_density() const;
    /// Quantum marginal sum_k p_k rho_k.
    CMatrix quantum_marginal() const;

   private:
    FiniteDistribution classical_;
    std::vector<CMatrix> blocks_;
    int dim_;
};

struct RazCheck {
    double lhs;
    double rhs;
    bool ok;
};

/// lhs = sum_i I(X_i : A)_rho, rhs = S(rho_XA || sigma_XA); sigma must be a
/// product over the classical variables and the quantum register.
RazCheck raz_lemma_check(const CQState &rho, const CQState &sigma);

struct ChainRuleCheck {
    double lhs;
    double rhs_sum;
    bool ok;
};

/// S(rho' || rho) against S(P_Z' || P_Z) + E_{z ~ P_Z'} S(rho'_z || rho_z).
ChainRuleCheck chain_rule_check(const CQState &rho_prime, const CQState &rho);

}  // namespace parrep

#endif
