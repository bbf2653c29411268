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
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "parrep/depbreak.h"
#include "parrep/verify.h"

namespace parrep {
namespace {

const double kCos2 = std::pow(std::cos(std::numbers::pi / 8), 2);
// Average item-2 distance of the printing fixture at n = 2, C = {2}; exact enumeration.
const double kPrintingItem2 = 0.063373836664566308;

TEST(Depbreak, CoordinateSplitValidation) {
    auto sp = CoordinateSplit::make(3, {2, 0});
    EXPECT_EQ(sp.C, (std::vector<int>{0, 2}));
    EXPECT_EQ(sp.rest, (std::vector<int>{1}));
    EXPECT_EQ(sp.rest_pos(1), 0);
    EXPECT_EQ(sp.rest_pos(0), -1);
    EXPECT_THROW(CoordinateSplit::make(2, {0, 0}), std::invalid_argument);
    EXPECT_THROW(CoordinateSplit::make(2, {2}), std::out_of_range);
    EXPECT_THROW(CoordinateSplit::make(2, {0, 1}), std::invalid_argument);
}

TEST(Depbreak, SingleCoordinateOmegaIsFairCoin) {
    Game g = chsh_game();
    auto sp = CoordinateSplit::make(1, {});
    auto joint = extended_joint(g, 1, tsirelson(1), sp);
    auto dm = marginal(joint, {d_name(0)});
    EXPECT_DOUBLE_EQ(dm.weight(0), 0.5);
    EXPECT_DOUBLE_EQ(dm.weight(1), 0.5);
    // Questions keep their law.
    auto xy = marginal(joint, {"X1", "Y1"});
    for (std::size_t k = 0; k < 4; k++) {
        EXPECT_NEAR(xy.weight(k), 0.25, 1e-15);
    }
}

TEST(Depbreak, OmegaProbabilitiesMatchProductFormula) {
    Game g = asym3_game();
    auto sp = CoordinateSplit::make(3, {1});
    auto omegas = enumerate_omega_minus(g, sp, 0);
    double total = 0.0;
    for (const auto &w : omegas) {
        // Rest position 1 is coordinate 2; position 0 is i itself.
        int lab = w.label[1];
        double marg = 0.0;
        for (int k = 0; k < 3; k++) {
            marg += w.dir[1] == 0 ? g.mu_at(lab, k) : g.mu_at(k, lab);
        }
        double expect = 0.5 * marg * g.mu_at(static_cast<int>(w.xc), static_cast<int>(w.yc));
        EXPECT_NEAR(w.prob, expect, 1e-15);
        total += w.prob;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Depbreak, CoarseFamilyEdgeCases) {
    Game g = chsh_game();
    auto s = tsirelson(1);
    auto sp = CoordinateSplit::make(1, {});
    auto omegas = enumerate_omega_minus(g, sp, 0);
    ASSERT_EQ(omegas.size(), 1u);
    // Nothing to condition on: the coarse family is the single identity effect.
    for (int x = 0; x < 2; x++) {
        auto fam = coarse_povm(g, s, sp, 0, omegas[0], {Player::kAlice, x}, Player::kAlice);
        ASSERT_EQ(fam.size(), 1u);
        EXPECT_LE((fam[0] - CMatrix::Identity(2, 2)).norm(), 1e-12);
    }
}

TEST(Depbreak, ProductCoarseOperatorsIgnoreOppositeQuestion) {
    Game g = chsh_game();
    auto s = tsirelson(2);
    auto sp = CoordinateSplit::make(2, {1});
    auto omegas = enumerate_omega_minus(g, sp, 0);
    for (const auto &w : omegas) {
        auto a0 = coarse_povm(g, s, sp, 0, w, {Player::kBob, 0}, Player::kAlice);
        auto a1 = coarse_povm(g, s, sp, 0, w, {Player::kBob, 1}, Player::kAlice);
        for (std::size_t ac = 0; ac < a0.size(); ac++) {
            EXPECT_LE((a0[ac] - a1[ac]).norm(), 1e-10);
        }
    }
}

TEST(Depbreak, AlignedOperatorExamples) {
    Rng rng(3);
    CMatrix rho = random_density(rng, 3, 3);
    auto id = aligned_operators(CMatrix::Identity(3, 3), rho);
    EXPECT_LE((id.U - CMatrix::Identity(3, 3)).norm(), 1e-10);
    CMatrix a = CMatrix::Zero(2, 2), r = CMatrix::Zero(2, 2);
    a(0, 0) = 0.3;
    a(1, 1) = 0.8;
    r(0, 0) = 0.6;
    r(1, 1) = 0.4;
    auto dg = aligned_operators(a, r);
    EXPECT_LE((dg.U - CMatrix::Identity(2, 2)).norm(), 1e-10);
    for (int t = 0; t < 5; t++) {
        CMatrix coarse = random_psd(rng, 3, 3);
        coarse /= coarse.norm();
        CMatrix rr = random_density(rng, 3, 3);
        auto al = aligned_operators(coarse, rr);
        EXPECT_LE((al.S.adjoint() * al.S - coarse).norm(), 1e-10);
        CMatrix ss = al.S * mat_sqrt(rr);
        EXPECT_LE(hermitian_deviation(ss), 1e-10);
        EXPECT_GE(min_hermitian_eigenvalue(ss), -1e-10);
    }
}

TEST(Depbreak, FinePovmExamples) {
    // Full-rank coarse operator with a single fine answer: the effect is the identity.
    CMatrix a = CMatrix::Identity(2, 2) * 0.5;
    auto al = aligned_operators(a, 0.5 * CMatrix::Identity(2, 2));
    auto fine = fine_povm(al.S, {a});
    ASSERT_EQ(fine.size(), 2u);
    EXPECT_LE((fine[0] - CMatrix::Identity(2, 2)).norm(), 1e-10);
    EXPECT_LE(fine[1].norm(), 1e-10);
    // Rank-deficient: effects sum to the support projector, null takes the rest.
    CMatrix p = CMatrix::Zero(2, 2);
    p(0, 0) = 0.7;
    auto al2 = aligned_operators(p, 0.5 * CMatrix::Identity(2, 2));
    CMatrix f1 = p * 0.4, f2 = p * 0.6;
    auto fp = fine_povm(al2.S, {f1, f2});
    CMatrix sum = fp[0] + fp[1];
    CMatrix support = CMatrix::Zero(2, 2);
    support(0, 0) = 1.0;
    EXPECT_LE((sum - support).norm(), 1e-10);
    EXPECT_LE((fp[2] - (CMatrix::Identity(2, 2) - support)).norm(), 1e-10);
    EXPECT_THROW(fine_povm(al2.S, {f1}), std::invalid_argument);
}

TEST(Depbreak, EmptyConditioningKeepsState) {
    Game g = chsh_game();
    auto b = build_bundle(g, 2, tsirelson(2), {});
    const auto &e = b.entry(0, 0, 0, 0, 0, 0);
    ASSERT_TRUE(e.state.present);
    EXPECT_NEAR(e.state.weight, 1.0, 1e-10);
    EXPECT_NEAR(std::abs(e.state.psi.dot(b.strategy.psi().amplitudes())), 1.0, 1e-10);
}

TEST(Depbreak, DepStateAbsentWhenWeightVanishes) {
    PureState psi(CVector::Unit(4, 0));
    CMatrix kill = CMatrix::Zero(2, 2);
    kill(1, 1) = 1.0;
    EXPECT_FALSE(dep_state(kill, CMatrix::Identity(2, 2), psi).present);
    EXPECT_TRUE(dep_state(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2), psi).present);
}

class UsefulnessOnFixtures : public ::testing::TestWithParam<std::tuple<std::string, int>> {};

TEST_P(UsefulnessOnFixtures, BornRuleMatchesBruteForceConditional) {
    auto [name, n] = GetParam();
    Game g = chsh_game();
    auto s = strategy_fixture(name, g, n);
    std::vector<int> C{n - 1};
    auto cmp = oracle::compare_depstate(g, n, s, C);
    EXPECT_GT(cmp.contexts, 0u);
    EXPECT_LE(cmp.max_residual, 1e-8);
    EXPECT_LE(cmp.max_weight_gap, 1e-8);
    // The library's own check agrees.
    auto split = CoordinateSplit::make(n, C);
    auto rep = usefulness_check(build_bundle(g, n, s, C), extended_joint(g, n, s, split));
    EXPECT_LE(rep.max_residual, 1e-8);
    EXPECT_LE(rep.max_weight_residual, 1e-8);
    EXPECT_LE(rep.max_weight_sum_defect, 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, UsefulnessOnFixtures,
                         ::testing::Combine(::testing::Values("tsirelson", "printing", "detprod"),
                                            ::testing::Values(2, 3)));

TEST(Depbreak, UsefulnessOnAsymmetricGameAndRandomStrategy) {
    Game g = asym3_game();
    Rng rng(5);
    auto s = random_strategy(rng, g, 2, 2);
    auto cmp = oracle::compare_depstate(g, 2, s, {0});
    EXPECT_LE(cmp.max_residual, 1e-8);
    EXPECT_LE(cmp.max_weight_gap, 1e-8);
}

TEST(Depbreak, DeterministicResidualIsTiny) {
    Game g = chsh_game();
    auto cmp = oracle::compare_depstate(g, 2, strategy_fixture("detprod", g, 2), {1});
    EXPECT_LE(cmp.max_residual, 1e-10);
}

TEST(Depbreak, SkewVanishesForProductFixtures) {
    Game g = chsh_game();
    for (const char *name : {"tsirelson", "detprod"}) {
        for (int n : {2, 3}) {
            auto sp = CoordinateSplit::make(n, {n - 1});
            auto r = skew_distances(g, extended_joint(g, n, strategy_fixture(name, g, n), sp), sp);
            EXPECT_LE(r.avg1, 1e-12) << name;
            EXPECT_LE(r.avg2, 1e-12) << name;
            EXPECT_LE(r.avg3, 1e-12) << name;
        }
    }
}

TEST(Depbreak, PrintingSkewRegression) {
    Game g = chsh_game();
    auto sp = CoordinateSplit::make(2, {1});
    auto r = skew_distances(g, extended_joint(g, 2, printing(2), sp), sp);
    EXPECT_GT(r.avg2, 0.0);
    EXPECT_NEAR(r.avg2, kPrintingItem2, 1e-10);
    // delta = (1/m) (log2(1/P(W_C)) + |C| answer bits), here m = |C| = 1.
    auto j = oracle::brute_joint(g, 2, printing(2));
    double p_wc = oracle::prob_win(g, 2, j, {1});
    EXPECT_NEAR(r.p_wc, p_wc, 1e-12);
    EXPECT_NEAR(r.delta, std::log2(1.0 / p_wc) + 2.0, 1e-9);
}

TEST(Depbreak, SampleabilityDistances) {
    Game g = chsh_game();
    for (const char *name : {"tsirelson", "detprod"}) {
        auto r = sampleability_distances(build_bundle(g, 2, strategy_fixture(name, g, 2), {1}));
        EXPECT_LE(r.avg_bob, 1e-9) << name;
        EXPECT_LE(r.avg_alice, 1e-9) << name;
        EXPECT_LE(r.avg_cross, 1e-9) << name;
    }
    auto p = sampleability_distances(build_bundle(g, 2, printing(2), {1}));
    EXPECT_GT(p.avg_bob, 1e-3);
    EXPECT_LE(p.max_triangle_excess, 1e-9);
    EXPECT_LE(p.avg_cross, 2.0);
}

TEST(Depbreak, XiBound) {
    Game g = chsh_game();
    auto empty = xi_raz_check(g, 2, tsirelson(2), {});
    EXPECT_NEAR(empty.delta, 0.0, 1e-12);
    EXPECT_NEAR(empty.avg_mi, 0.0, 1e-9);
    EXPECT_TRUE(empty.ok);
    for (const char *name : {"tsirelson", "printing"}) {
        auto r = xi_raz_check(g, 2, strategy_fixture(name, g, 2), {1});
        EXPECT_TRUE(r.ok) << name;
        EXPECT_LE(r.avg_mi, r.delta + 1e-6) << name;
    }
}

TEST(Depbreak, ChooseCExamples) {
    Game t = trivial_game();
    auto s = tsirelson(2);
    auto r = choose_C(born_joint(t, 2, s), t, 2, 0.25, 1);
    EXPECT_TRUE(r.C.empty());
    EXPECT_NEAR(r.score, 1.0, 1e-12);
    EXPECT_TRUE(r.threshold_met);

    Game g = chsh_game();
    auto s3 = tsirelson(3);
    auto joint = born_joint(g, 3, s3);
    auto c = choose_C(joint, g, 3, 0.25, 2);
    EXPECT_TRUE(c.C.empty());
    for (const auto &row : c.table) {
        EXPECT_NEAR(row.score, kCos2, 1e-12);
    }
    // Conditional rates agree with the brute-force joint.
    auto pj = printing(3);
    auto pjj = oracle::brute_joint(g, 3, pj);
    auto rates = conditional_win_rates(born_joint(g, 3, pj), g, 3, {0});
    ASSERT_EQ(rates.size(), 2u);
    EXPECT_NEAR(rates[0], oracle::cond_win(g, 3, pjj, 1, {0}), 1e-12);
    EXPECT_NEAR(rates[1], oracle::cond_win(g, 3, pjj, 2, {0}), 1e-12);
}

TEST(Depbreak, ReportsAndLabels) {
    Game g = chsh_game();
    auto sp = CoordinateSplit::make(2, {1});
    auto b = build_bundle(g, 2, tsirelson(2), {1});
    auto label = omega_label(sp, 0, b.coords[0].omegas[0]);
    EXPECT_NE(label.find("xC="), std::string::npos);
    auto rep = usefulness_check(b, extended_joint(g, 2, tsirelson(2), sp));
    auto csv = bundle_csv(b, rep);
    EXPECT_EQ(csv.rfind("i,omega,aC,bC,xi,yi,weight,residual", 0), 0u);
}

TEST(Depbreak, VerifySuitesPassOnFixtures) {
    Game g = chsh_game();
    for (const char *name : {"tsirelson", "printing", "detprod"}) {
        auto s = strategy_fixture(name, g, 2);
        EXPECT_TRUE(verify_usefulness(g, 2, s, {1}).passed()) << name;
        EXPECT_TRUE(verify_skew(g, 2, s, {1}).passed()) << name;
        EXPECT_TRUE(verify_sampleability(g, 2, s, {1}).passed()) << name;
        EXPECT_TRUE(verify_xi(g, 2, s, {1}).passed()) << name;
    }
}

}  // namespace
}  // namespace parrep
