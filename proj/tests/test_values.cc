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

#include <gtest/gtest.h>

#include "oracles.h"
#include "parrep/values.h"

namespace parrep {
namespace {

const double kCos2 = std::pow(std::cos(std::numbers::pi / 8), 2);

double top_eigenvalue(const CMatrix &h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    return es.eigenvalues().maxCoeff();
}

TEST(Values, ClassicalValuesMatchBruteForce) {
    Game g = chsh_game();
    EXPECT_DOUBLE_EQ(classical_value(g, 1), oracle::classical_brute(g, 1));
    EXPECT_DOUBLE_EQ(classical_value(g, 1), 0.75);
    double v2 = classical_value(g, 2);
    EXPECT_NEAR(v2, oracle::classical_brute(g, 2), 1e-15);
    EXPECT_NEAR(v2, 0.625, 1e-15);
    EXPECT_NEAR(classical_value(asym3_game(), 1), oracle::classical_brute(asym3_game(), 1), 1e-15);
    EXPECT_DOUBLE_EQ(classical_value(trivial_game(), 1), 1.0);
    EXPECT_DOUBLE_EQ(classical_value(trivial_game(), 2), 1.0);
}

TEST(Values, ClassicalOptimumStrategyAchievesValue) {
    Game g = chsh_game();
    auto r = classical_optimum(g, 2);
    EXPECT_NEAR(win_probability(g, 2, r.strategy), r.value, 1e-15);
}

TEST(Values, ClassicalEnumerationCapIsEnforced) {
    EXPECT_THROW(classical_value(chsh_game(), 3), std::length_error);
}

TEST(Values, BellOperatorExamples) {
    Game t = trivial_game();
    auto s = tsirelson(1);
    CMatrix one = bell_operator(t, s.alice(), s.bob());
    EXPECT_LE((one - CMatrix::Identity(4, 4)).norm(), 1e-12);
    Game g = chsh_game();
    EXPECT_NEAR(top_eigenvalue(bell_operator(g, s.alice(), s.bob())), kCos2, 1e-9);
    // <psi|W|psi> is the win probability.
    CVector psi = s.psi().amplitudes();
    EXPECT_NEAR((psi.adjoint() * bell_operator(g, s.alice(), s.bob()) * psi)(0).real(), kCos2, 1e-12);
    auto det = detprod(g, 1).to_entangled(g);
    EXPECT_NEAR(top_eigenvalue(bell_operator(g, det.alice(), det.bob())), 0.75, 1e-12);
}

TEST(Values, SeesawTrivialGame) {
    SeesawConfig cfg;
    auto r = seesaw(trivial_game(), cfg);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_LE(r.iterations, 2);
}

TEST(Values, SeesawUnentangledStaysClassical) {
    SeesawConfig cfg;
    cfg.d = 1;
    for (std::uint64_t seed = 1; seed <= 5; seed++) {
        cfg.seed = seed;
        EXPECT_LE(seesaw(chsh_game(), cfg).value, 0.75 + 1e-9);
    }
}

TEST(Values, SeesawReachesTsirelsonAndIsMonotone) {
    SeesawConfig cfg;
    double best = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; seed++) {
        cfg.seed = seed;
        auto r = seesaw(chsh_game(), cfg);
        for (std::size_t k = 1; k < r.trace.size(); k++) {
            EXPECT_GE(r.trace[k], r.trace[k - 1] - 1e-10);
        }
        EXPECT_LE(r.value, kCos2 + 1e-9);
        // The returned strategy realizes the reported value.
        EXPECT_NEAR(win_probability(chsh_game(), 1, r.strategy), r.value, 1e-9);
        best = std::max(best, r.value);
    }
    EXPECT_GE(best, 0.8535);
}

TEST(Values, BoundFormulaExamples) {
    auto a = theorem1_bound(0.25, 2, std::pow(2.0, 40));
    EXPECT_NEAR(a.raw, 80.0 * std::pow(2.0, 24), 1e-3);
    EXPECT_DOUBLE_EQ(a.bound_value, 1.0);
    EXPECT_TRUE(a.vacuous);
    auto b = theorem1_bound(1.0, 1, std::pow(2.0, 64));
    EXPECT_NEAR(b.raw, 64.0 / 65536.0, 1e-15);
    EXPECT_DOUBLE_EQ(b.bound_value, b.raw);
    EXPECT_FALSE(b.vacuous);
    auto nat = theorem1_bound(1.0, 1, std::pow(2.0, 64), 1.0, LogBase::kNatural);
    EXPECT_NEAR(nat.raw, 64.0 * std::log(2.0) / 65536.0, 1e-15);
}

TEST(Values, BoundClampsAndDecaysOnceNonvacuous) {
    bool seen_nonvacuous = false;
    double prev = 2.0;
    for (int e = 10; e <= 200; e++) {
        auto r = theorem1_bound(1.0, 1, std::pow(2.0, e));
        EXPECT_LE(r.bound_value, 1.0);
        if (r.raw >= 1.0) {
            EXPECT_DOUBLE_EQ(r.bound_value, 1.0);
            EXPECT_TRUE(r.vacuous);
        } else {
            seen_nonvacuous = true;
            EXPECT_LE(r.bound_value, prev);
        }
        if (seen_nonvacuous) {
            prev = r.bound_value;
        }
    }
    EXPECT_TRUE(seen_nonvacuous);
    EXPECT_THROW(theorem1_bound(0.0, 1, 16), std::invalid_argument);
    EXPECT_THROW(theorem1_bound(0.5, 1, 0.5), std::invalid_argument);
}

}  // namespace
}  // namespace parrep
