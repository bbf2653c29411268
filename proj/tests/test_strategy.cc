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
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"
#include "parrep/strategy.h"

namespace parrep {
namespace {

const double kCos2 = std::pow(std::cos(std::numbers::pi / 8), 2);

double max_correlation_gap(const Game &g, int n, const EntangledStrategy &a, const EntangledStrategy &b) {
    auto ja = oracle::brute_joint(g, n, a), jb = oracle::brute_joint(g, n, b);
    double gap = 0.0;
    for (std::size_t k = 0; k < ja.p.size(); k++) {
        gap = std::max(gap, std::abs(ja.p[k] - jb.p[k]));
    }
    return gap;
}

TEST(Strategy, PovmValidation) {
    CMatrix half = 0.5 * CMatrix::Identity(2, 2);
    EXPECT_NO_THROW(POVMFamily(2, {{half, half}}));
    EXPECT_THROW(POVMFamily(2, {{half, half, half}}), std::invalid_argument);
    CMatrix neg = CMatrix::Identity(2, 2);
    neg(0, 0) = -0.5;
    CMatrix rest = CMatrix::Identity(2, 2) - neg;
    EXPECT_THROW(POVMFamily(2, {{neg, rest}}), std::invalid_argument);
}

TEST(Strategy, TsirelsonWinsAtTsirelsonBound) {
    Game g = chsh_game();
    EXPECT_NEAR(win_probability(g, 1, tsirelson(1)), kCos2, 1e-12);
    auto j = oracle::brute_joint(g, 1, tsirelson(1));
    EXPECT_NEAR(oracle::prob_win(g, 1, j, {0}), kCos2, 1e-12);
    // Product strategy: all-coordinates win is the product.
    EXPECT_NEAR(win_probability(g, 2, tsirelson(2)), kCos2 * kCos2, 1e-12);
}

TEST(Strategy, BornJointMatchesLoopOracle) {
    Game g = chsh_game();
    for (const char *name : {"tsirelson", "printing", "detprod"}) {
        auto s = strategy_fixture(name, g, 2);
        auto joint = born_joint(g, 2, s);
        auto oj = oracle::brute_joint(g, 2, s);
        double gap = 0.0;
        for (std::size_t k = 0; k < joint.size(); k++) {
            auto v = joint.decode(k);
            // Variables: X1 X2 Y1 Y2 A1 A2 B1 B2.
            std::size_t x = v[0] * 2 + v[1], y = v[2] * 2 + v[3], a = v[4] * 2 + v[5], b = v[6] * 2 + v[7];
            gap = std::max(gap, std::abs(joint.weight(k) - oj.at(x, y, a, b)));
        }
        EXPECT_LE(gap, 1e-12) << name;
    }
}

TEST(Strategy, AnswerTableMatchesOracle) {
    auto s = printing(2);
    for (std::size_t x = 0; x < 4; x++) {
        for (std::size_t y = 0; y < 4; y++) {
            auto t = answer_table(s, x, y);
            double total = 0.0;
            for (std::size_t a = 0; a < 4; a++) {
                for (std::size_t b = 0; b < 4; b++) {
                    EXPECT_NEAR(t[a * 4 + b],
                                oracle::born(s.psi().amplitudes(), s.alice().effect(x, a), s.bob().effect(y, b)), 1e-12);
                    total += t[a * 4 + b];
                }
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(Strategy, DeterministicEmbeddingGivesPointMasses) {
    Game g = chsh_game();
    auto det = detprod(g, 2);
    auto e = det.to_entangled(g);
    EXPECT_EQ(e.d(), 1);
    for (std::size_t x = 0; x < 4; x++) {
        for (std::size_t y = 0; y < 4; y++) {
            auto t = answer_table(e, x, y);
            for (std::size_t k = 0; k < t.size(); k++) {
                double expect = (k == det.alice[x] * 4 + det.bob[y]) ? 1.0 : 0.0;
                EXPECT_DOUBLE_EQ(t[k], expect);
            }
        }
    }
    EXPECT_NEAR(win_probability(g, 2, det), 0.5625, 1e-15);
    EXPECT_NEAR(win_probability(g, 2, e), 0.5625, 1e-15);
}

TEST(Strategy, AllOnesPredicateAlwaysWins) {
    Game g = trivial_game();
    Rng rng(3);
    EXPECT_NEAR(win_probability(g, 2, random_strategy(rng, g, 2, 2)), 1.0, 1e-12);
    EXPECT_NEAR(win_probability(g, 1, tsirelson(1)), 1.0, 1e-12);
}

TEST(Strategy, SymmetrizePreservesCorrelations) {
    Game g = chsh_game();
    auto s = tsirelson(1);
    auto sym = symmetrize(s);
    EXPECT_LE(max_correlation_gap(g, 1, s, sym), 1e-12);
    // Already symmetric: state unchanged up to phase.
    EXPECT_NEAR(std::abs(sym.psi().amplitudes().dot(s.psi().amplitudes())), 1.0, 1e-12);

    // Bell state with a rotated Bob basis: symmetrize restores the u (x) u form.
    Rng rng(8);
    CMatrix v = random_unitary(rng, 2);
    CVector psi = tensor(CMatrix(CMatrix::Identity(2, 2)), v) * s.psi().amplitudes();
    EntangledStrategy rotated(1, PureState(psi), s.alice(), s.bob().conjugated(v));
    auto fixed = symmetrize(rotated);
    EXPECT_LE(max_correlation_gap(g, 1, rotated, fixed), 1e-10);
    CMatrix m = fixed.psi_matrix();
    EXPECT_LE((m - m.transpose()).norm(), 1e-10);
    ASSERT_TRUE(fixed.symmetric_basis().has_value());

    auto rs = random_strategy(rng, asym3_game(), 1, 3);
    EXPECT_LE(max_correlation_gap(asym3_game(), 1, rs, symmetrize(rs)), 1e-10);
}

TEST(Strategy, PrintingDiffersFromProductButIsValid) {
    Game g = chsh_game();
    auto p = printing(2), t = tsirelson(2);
    EXPECT_GT(max_correlation_gap(g, 2, p, t), 1e-3);
    auto j = oracle::brute_joint(g, 2, p);
    EXPECT_NEAR(win_probability(g, 2, p), oracle::prob_win(g, 2, j, {0, 1}), 1e-12);
    EXPECT_NEAR(std::accumulate(j.p.begin(), j.p.end(), 0.0), 1.0, 1e-12);
    // Zero shift recovers the product strategy.
    EXPECT_LE(max_correlation_gap(g, 2, printing(2, 0.0), t), 1e-12);
}

TEST(Strategy, CompatibilityChecks) {
    Game g = chsh_game();
    EXPECT_NO_THROW(check_compatible(g, 2, tsirelson(2)));
    EXPECT_THROW(check_compatible(g, 3, tsirelson(2)), std::invalid_argument);
    EXPECT_THROW(check_compatible(asym3_game(), 1, tsirelson(1)), std::invalid_argument);
    EXPECT_THROW(strategy_fixture("unknown", g, 1), std::invalid_argument);
}

TEST(Strategy, ProductStrategyMatchesTensorFixture) {
    Game g = chsh_game();
    auto p = product_strategy({tsirelson(1), tsirelson(1)});
    EXPECT_LE(max_correlation_gap(g, 2, p, tsirelson(2)), 1e-12);
}

TEST(Strategy, TextRoundTrip) {
    Rng rng(12);
    auto s = random_strategy(rng, chsh_game(), 1, 2);
    auto back = strategy_from_text(strategy_to_text(s));
    EXPECT_LE(max_correlation_gap(chsh_game(), 1, s, back), 1e-14);
    auto path = (std::filesystem::temp_directory_path() / "parrep_strategy_test.json").string();
    save_strategy(s, path);
    EXPECT_LE(max_correlation_gap(chsh_game(), 1, s, load_strategy(path)), 1e-14);
    std::remove(path.c_str());
    EXPECT_THROW(strategy_from_text("{}"), std::invalid_argument);
}

}  // namespace
}  // namespace parrep
