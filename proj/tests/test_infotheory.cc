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

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.h"
#include "parrep/infotheory.h"
#include "parrep/verify.h"

namespace parrep {
namespace {

CMatrix diag(std::vector<double> v) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    for (std::size_t k = 0; k < v.size(); k++) {
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = v[k];
    }
    return m;
}

double plain_entropy(const std::vector<double> &p) {
    double h = 0.0;
    for (double x : p) {
        if (x > 0) {
            h -= x * std::log2(x);
        }
    }
    return h;
}

TEST(Infotheory, ShannonAndVonNeumann) {
    std::vector<double> p{0.5, 0.25, 0.25};
    EXPECT_NEAR(shannon_entropy(p), 1.5, 1e-15);
    EXPECT_NEAR(von_neumann_entropy(diag(p)), 1.5, 1e-12);
    Rng rng(4);
    CMatrix u = random_unitary(rng, 3);
    // Unitary invariance.
    EXPECT_NEAR(von_neumann_entropy(u * diag(p) * u.adjoint()), plain_entropy(p), 1e-10);
    EXPECT_NEAR(von_neumann_entropy(projector(random_state(rng, 3))), 0.0, 1e-10);
}

TEST(Infotheory, KlDivergence) {
    std::vector<double> p{1.0, 0.0}, q{0.5, 0.5};
    EXPECT_NEAR(kl_divergence(p, q), 1.0, 1e-15);
    EXPECT_EQ(kl_divergence(q, p), kInfinity);
    EXPECT_NEAR(kl_divergence(q, q), 0.0, 1e-15);
}

TEST(Infotheory, RelativeEntropyExamples) {
    DensityMatrix rho(diag({1.0, 0.0})), half(diag({0.5, 0.5}));
    EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-12);
    EXPECT_NEAR(relative_entropy(half, half), 0.0, 1e-12);
    EXPECT_NEAR(relative_entropy(rho, half), 1.0, 1e-12);
    EXPECT_EQ(relative_entropy(half, rho), kInfinity);
    // Commuting states reduce to the classical divergence.
    std::vector<double> p{0.2, 0.3, 0.5}, q{0.4, 0.4, 0.2};
    EXPECT_NEAR(relative_entropy(DensityMatrix(diag(p)), DensityMatrix(diag(q))), kl_divergence(p, q), 1e-12);
}

TEST(Infotheory, RelativeMinEntropyExamples) {
    DensityMatrix rho(diag({1.0, 0.0})), half(diag({0.5, 0.5}));
    EXPECT_NEAR(relative_min_entropy(rho, rho), 0.0, 1e-9);
    EXPECT_NEAR(relative_min_entropy(rho, half), 1.0, 1e-9);
    EXPECT_EQ(relative_min_entropy(half, rho), kInfinity);
    // Commuting case: log2 max_k p_k / q_k.
    std::vector<double> p{0.2, 0.3, 0.5}, q{0.4, 0.4, 0.2};
    EXPECT_NEAR(relative_min_entropy(DensityMatrix(diag(p)), DensityMatrix(diag(q))), std::log2(2.5), 1e-9);
    Rng rng(6);
    for (int t = 0; t < 20; t++) {
        DensityMatrix a(random_density(rng, 3, 3)), b(random_density(rng, 3, 3));
        EXPECT_GE(relative_min_entropy(a, b), relative_entropy(a, b) - 1e-9);
    }
}

TEST(Infotheory, MutualInformationExamples) {
    Rng rng(2);
    CMatrix prod = tensor(random_density(rng, 2, 2), random_density(rng, 2, 2));
    EXPECT_NEAR(mutual_information(DensityMatrix(prod), 2, 2), 0.0, 1e-10);
    CVector bell = CVector::Zero(4);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    EXPECT_NEAR(mutual_information(DensityMatrix(projector(bell)), 2, 2), 2.0, 1e-10);
    EXPECT_NEAR(mutual_information(DensityMatrix(diag({0.5, 0, 0, 0.5})), 2, 2), 1.0, 1e-10);
}

TEST(Infotheory, HolevoQuantity) {
    std::vector<double> w{0.5, 0.5};
    std::vector<CMatrix> orth{diag({1, 0}), diag({0, 1})};
    EXPECT_NEAR(holevo_quantity(w, orth), 1.0, 1e-12);
    std::vector<CMatrix> same{diag({0.3, 0.7}), diag({0.3, 0.7})};
    EXPECT_NEAR(holevo_quantity(w, same), 0.0, 1e-12);
}

TEST(Infotheory, CqStateAssembly) {
    std::vector<CMatrix> blocks{0.25 * diag({1, 0}), 0.75 * diag({0.5, 0.5})};
    auto cq = CQState::from_unnormalized({{"Z", 2}}, blocks);
    EXPECT_NEAR(cq.classical().weight(0), 0.25, 1e-15);
    CMatrix full = cq.to_density().matrix();
    EXPECT_EQ(full.rows(), 4);
    EXPECT_NEAR(full(0, 0).real(), 0.25, 1e-15);
    EXPECT_NEAR(full(3, 3).real(), 0.375, 1e-15);
    EXPECT_LE((cq.quantum_marginal() - diag({0.625, 0.375})).norm(), 1e-15);
}

TEST(Infotheory, RazProductAndCorrelatedCases) {
    std::vector<Variable> vars{{"X1", 2}, {"X2", 2}};
    std::vector<CMatrix> blocks(4, 0.25 * diag({0.5, 0.5}));
    auto sigma = CQState::from_unnormalized(vars, blocks);
    auto same = raz_lemma_check(sigma, sigma);
    EXPECT_NEAR(same.lhs, 0.0, 1e-12);
    EXPECT_NEAR(same.rhs, 0.0, 1e-12);
    EXPECT_TRUE(same.ok);

    // Two perfectly correlated classical bits copied into the register.
    std::vector<CMatrix> corr{0.5 * diag({1, 0}), CMatrix::Zero(2, 2), CMatrix::Zero(2, 2), 0.5 * diag({0, 1})};
    auto rho = CQState::from_unnormalized(vars, corr);
    auto r = raz_lemma_check(rho, sigma);
    // Oracle: I(X1:A) = I(X2:A) = 1; S(rho||sigma) = KL((.5,0,0,.5)||uniform) + E S(block||I/2) = 1 + 1.
    EXPECT_NEAR(r.lhs, 2.0, 1e-10);
    EXPECT_NEAR(r.rhs, 2.0, 1e-10);
    EXPECT_TRUE(r.ok);
}

TEST(Infotheory, ChainRuleExamples) {
    std::vector<Variable> z{{"Z", 2}};
    Rng rng(10);
    std::vector<CMatrix> b1{0.5 * random_density(rng, 2, 2), 0.5 * random_density(rng, 2, 2)};
    auto rho = CQState::from_unnormalized(z, b1);
    auto same = chain_rule_check(rho, rho);
    EXPECT_NEAR(same.lhs, 0.0, 1e-10);
    EXPECT_NEAR(same.rhs_sum, 0.0, 1e-10);

    // Equal classical parts, differing blocks.
    std::vector<CMatrix> b2{0.5 * random_density(rng, 2, 2), 0.5 * random_density(rng, 2, 2)};
    auto rho2 = CQState::from_unnormalized(z, b2);
    auto c = chain_rule_check(rho2, rho);
    double expect = 0.5 * relative_entropy(DensityMatrix(2 * b2[0]), DensityMatrix(2 * b1[0])) +
                    0.5 * relative_entropy(DensityMatrix(2 * b2[1]), DensityMatrix(2 * b1[1]));
    EXPECT_NEAR(c.rhs_sum, expect, 1e-9);
    EXPECT_NEAR(c.lhs, expect, 1e-9);
    EXPECT_TRUE(c.ok);

    // Differing classical parts, equal blocks.
    CMatrix blk = random_density(rng, 2, 2);
    auto p = CQState::from_unnormalized(z, {0.3 * blk, 0.7 * blk});
    auto q = CQState::from_unnormalized(z, {0.6 * blk, 0.4 * blk});
    std::vector<double> pp{0.3, 0.7}, qq{0.6, 0.4};
    auto d = chain_rule_check(p, q);
    EXPECT_NEAR(d.lhs, kl_divergence(pp, qq), 1e-10);
    EXPECT_NEAR(d.rhs_sum, kl_divergence(pp, qq), 1e-10);
}

TEST(Infotheory, RandomizedFactSweepHasNoViolations) {
    auto rep = verify_infotheory(7, 200, 100);
    EXPECT_TRUE(rep.passed()) << rep.first_failure();
}

TEST(Infotheory, MatrixFactSweepHasNoViolations) {
    auto rep = verify_matcore(7, 200);
    EXPECT_TRUE(rep.passed()) << rep.first_failure();
}

}  // namespace
}  // namespace parrep
