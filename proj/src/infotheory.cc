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

#include "parrep/infotheory.h"

#include <cmath>
#include <stdexcept>

namespace parrep {

namespace {

double xlog2x(double v) {
    return v > 0.0 ? v * std::log2(v) : 0.0;
}

}  // namespace

double shannon_entropy(std::span<const double> p) {
    std::vector<double> terms;
    for (double v : p) {
        terms.push_back(-xlog2x(v));
    }
    return stable_sum(terms);
}

double von_neumann_entropy(const CMatrix &rho) {
    auto eig = hermitian_eigen(0.5 * (rho + rho.adjoint()));
    std::vector<double> terms;
    for (Eigen::Index k = 0; k < eig.values.size(); k++) {
        terms.push_back(-xlog2x(eig.values[k]));
    }
    return std::max(0.0, stable_sum(terms));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("kl_divergence: size mismatch");
    }
    std::vector<double> terms;
    for (std::size_t k = 0; k < p.size(); k++) {
        if (p[k] <= 0.0) {
            continue;
        }
        if (q[k] <= 0.0) {
            return kInfinity;
        }
        terms.push_back(p[k] * std::log2(p[k] / q[k]));
    }
    return stable_sum(terms);
}

double relative_entropy(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("relative_entropy: dimension mismatch");
    }
    auto es = hermitian_eigen(sigma.matrix());
    std::vector<double> cross;
    double kernel_mass = 0.0;
    for (Eigen::Index k = 0; k < es.values.size(); k++) {
        CVector v = es.vectors.col(k);
        double w = (v.adjoint() * rho.matrix() * v)(0, 0).real();
        if (es.values[k] <= kKernelEig) {
            kernel_mass += std::max(w, 0.0);
        } else {
            cross.push_back(w * std::log2(es.values[k]));
        }
    }
    if (kernel_mass > kSupportTol) {
        return kInfinity;
    }
    return -von_neumann_entropy(rho.matrix()) - stable_sum(cross);
}

double relative_min_entropy(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("relative_min_entropy: dimension mismatch");
    }
    auto es = hermitian_eigen(sigma.matrix());
    const int d = sigma.dim();
    int r = 0;
    while (r < d && es.values[r] > kKernelEig) {
        r++;
    }
    CMatrix ker = es.vectors.rightCols(d - r);
    if (d - r > 0 && (ker.adjoint() * rho.matrix() * ker).trace().real() > kSupportTol) {
        return kInfinity;
    }
    CMatrix v = es.vectors.leftCols(r);
    CMatrix inv_sqrt = CMatrix::Zero(r, r);
    for (int k = 0; k < r; k++) {
        inv_sqrt(k, k) = 1.0 / std::sqrt(es.values[k]);
    }
    CMatrix m = inv_sqrt * v.adjoint() * rho.matrix() * v * inv_sqrt;
    auto em = hermitian_eigen(0.5 * (m + m.adjoint()));
    return std::log2(em.values[0]);
}

double mutual_information(const DensityMatrix &rho_ab, int dim_a, int dim_b) {
    if (dim_a * dim_b != rho_ab.dim()) {
        throw std::invalid_argument("mutual_information: bipartition does not match dimension");
    }
    CMatrix ra = partial_trace(rho_ab.matrix(), dim_a, dim_b, TracedSide::kRight);
    CMatrix rb = partial_trace(rho_ab.matrix(), dim_a, dim_b, TracedSide::kLeft);
    double mi = von_neumann_entropy(ra) + von_neumann_entropy(rb) - von_neumann_entropy(rho_ab.matrix());
    return std::max(0.0, mi);
}

double holevo_quantity(std::span<const double> weights, std::span<const CMatrix> blocks) {
    if (weights.size() != blocks.size() || blocks.empty()) {
        throw std::invalid_argument("holevo_quantity: shape mismatch");
    }
    CMatrix avg = CMatrix::Zero(blocks[0].rows(), blocks[0].cols());
    std::vector<double> terms;
    for (std::size_t k = 0; k < blocks.size(); k++) {
        if (weights[k] == 0.0) {
            continue;
        }
        avg += weights[k] * blocks[k];
        terms.push_back(weights[k] * von_neumann_entropy(blocks[k]));
    }
    return std::max(0.0, von_neumann_entropy(avg) - stable_sum(terms));
}

CQState::CQState(FiniteDistribution classical, std::vector<CMatrix> blocks)
    : classical_(std::move(classical)), blocks_(std::move(blocks)) {
    if (blocks_.size() != classical_.size() || blocks_.empty()) {
        throw std::invalid_argument("CQState: one block per classical assignment required");
    }
    dim_ = static_cast<int>(blocks_[0].rows());
    for (std::size_t k = 0; k < blocks_.size(); k++) {
        if (blocks_[k].rows() != dim_ || blocks_[k].cols() != dim_) {
            throw std::invalid_argument("CQState: blocks differ in shape");
        }
        if (classical_.weight(k) > 0.0) {
            DensityMatrix check(blocks_[k]);
        }
    }
}

CQState CQState::from_unnormalized(std::vector<Variable> variables, const std::vector<CMatrix> &blocks) {
    std::vector<double> w;
    std::vector<CMatrix> norm;
    for (const auto &b : blocks) {
        double t = b.trace().real();
        w.push_back(std::max(t, 0.0));
        if (t > 1e-15) {
            CMatrix m = b / t;
            norm.push_back(0.5 * (m + m.adjoint()));
        } else {
            norm.push_back(CMatrix::Identity(b.rows(), b.cols()) / static_cast<double>(b.rows()));
        }
    }
    auto dist = FiniteDistribution::from_masses(std::move(variables), std::move(w));
    // Assignments whose mass rounded away keep the placeholder block.
    for (std::size_t k = 0; k < norm.size(); k++) {
        if (dist.weight(k) == 0.0) {
            norm[k] = CMatrix::Identity(norm[k].rows(), norm[k].cols()) / static_cast<double>(norm[k].rows());
        }
    }
    return CQState(std::move(dist), std::move(norm));
}

DensityMatrix CQState::to_density() const {
    const Eigen::Index nk = static_cast<Eigen::Index>(blocks_.size());
    CMatrix m = CMatrix::Zero(nk * dim_, nk * dim_);
    for (Eigen::Index k = 0; k < nk; k++) {
        m.block(k * dim_, k * dim_, dim_, dim_) = classical_.weight(k) * blocks_[k];
    }
    return DensityMatrix(m);
}

CMatrix CQState::quantum_marginal() const {
    CMatrix m = CMatrix::Zero(dim_, dim_);
    for (std::size_t k = 0; k < blocks_.size(); k++) {
        m += classical_.weight(k) * blocks_[k];
    }
    return m;
}

RazCheck raz_lemma_check(const CQState &rho, const CQState &sigma) {
    if (rho.classical().variables() != sigma.classical().variables() || rho.dim() != sigma.dim()) {
        throw std::invalid_argument("raz_lemma_check: shape mismatch");
    }
    const auto &vars = sigma.classical().variables();
    // sigma must be product: equal blocks and factorized weights.
    for (std::size_t k = 1; k < sigma.blocks().size(); k++) {
        if ((sigma.blocks()[k] - sigma.blocks()[0]).norm() > 1e-9) {
            throw std::invalid_argument("raz_lemma_check: sigma is not product with the quantum register");
        }
    }
    std::vector<FiniteDistribution> factors;
    for (const auto &v : vars) {
        factors.push_back(marginal(sigma.classical(), {v.name}));
    }
    for (std::size_t k = 0; k < sigma.classical().size(); k++) {
        double prod = 1.0;
        for (std::size_t j = 0; j < vars.size(); j++) {
            prod *= factors[j].weight(sigma.classical().value(k, static_cast<int>(j)));
        }
        if (std::abs(prod - sigma.classical().weight(k)) > 1e-12) {
            throw std::invalid_argument("raz_lemma_check: sigma is not a product over the classical variables");
        }
    }

    double lhs = 0.0;
    for (std::size_t j = 0; j < vars.size(); j++) {
        std::vector<double> w(vars[j].size, 0.0);
        std::vector<CMatrix> blocks(vars[j].size, CMatrix::Zero(rho.dim(), rho.dim()));
        for (std::size_t k = 0; k < rho.classical().size(); k++) {
            int v = rho.classical().value(k, static_cast<int>(j));
            double p = rho.classical().weight(k);
            w[v] += p;
            blocks[v] += p * rho.blocks()[k];
        }
        for (int v = 0; v < vars[j].size; v++) {
            if (w[v] > 0.0) {
                blocks[v] /= w[v];
            }
        }
        lhs += holevo_quantity(w, blocks);
    }
    double rhs = relative_entropy(rho.to_density(), sigma.to_density());
    return {lhs, rhs, lhs <= rhs + 1e-8};
}

ChainRuleCheck chain_rule_check(const CQState &rho_prime, const CQState &rho) {
    if (rho_prime.classical().variables() != rho.classical().variables() || rho_prime.dim() != rho.dim()) {
        throw std::invalid_argument("chain_rule_check: states are not over the same labels");
    }
    double lhs = relative_entropy(rho_prime.to_density(), rho.to_density());
    double rhs = kl_divergence(rho_prime.classical().weights(), rho.classical().weights());
    std::vector<double> terms;
    for (std::size_t k = 0; k < rho.classical().size(); k++) {
        double p = rho_prime.classical().weight(k);
        if (p == 0.0) {
            continue;
        }
        double s = relative_entropy(DensityMatrix(rho_prime.blocks()[k]), DensityMatrix(rho.blocks()[k]));
        if (std::isinf(s)) {
            rhs = kInfinity;
            break;
        }
        terms.push_back(p * s);
    }
    if (!std::isinf(rhs)) {
        rhs += stable_sum(terms);
    }
    bool ok = (std::isinf(lhs) && std::isinf(rhs)) || std::abs(lhs - rhs) <= 1e-8;
    return {lhs, rhs, ok};
}

}  // namespace parrep
