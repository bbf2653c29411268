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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "parrep/games.h"
#include "parrep/prob.h"
#include "parrep/strategy.h"

namespace parrep {
namespace {

FiniteDistribution bits2() {
    return FiniteDistribution::uniform({{"B1", 2}, {"B2", 2}});
}

TEST(Prob, ConstructionValidates) {
    EXPECT_THROW(FiniteDistribution({{"X", 2}}, {0.5, 0.6}), std::invalid_argument);
    EXPECT_THROW(FiniteDistribution({{"X", 2}}, {1.2, -0.2}), std::invalid_argument);
    EXPECT_THROW(FiniteDistribution({{"X", 2}}, {1.0}), std::invalid_argument);
    EXPECT_THROW(FiniteDistribution::from_masses({{"X", 2}}, {0.0, 0.0}), ZeroProbabilityEvent);
    auto d = FiniteDistribution::from_masses({{"X", 2}}, {1.0, 3.0});
    EXPECT_DOUBLE_EQ(d.weight(1), 0.75);
}

TEST(Prob, EncodeDecodeRowMajor) {
    FiniteDistribution d = FiniteDistribution::uniform({{"A", 2}, {"B", 3}});
    // First variable is the most significant digit.
    std::vector<int> v{1, 2};
    EXPECT_EQ(d.encode(v), 5u);
    EXPECT_EQ(d.decode(4), (std::vector<int>{1, 1}));
    EXPECT_EQ(d.value(4, 0), 1);
    EXPECT_EQ(d.var_index("B"), 1);
    EXPECT_THROW(d.var_index("C"), std::invalid_argument);
}

TEST(Prob, ConditionExamples) {
    auto d = bits2();
    auto first0 = Event::from_predicate(d, [&](std::size_t k) { return d.value(k, 0) == 0; });
    auto c = condition(d, first0);
    EXPECT_DOUBLE_EQ(c.weight(0), 0.5);
    EXPECT_DOUBLE_EQ(c.weight(1), 0.5);
    EXPECT_DOUBLE_EQ(c.weight(2), 0.0);
    auto same = condition(d, Event::full(d.size()));
    for (std::size_t k = 0; k < d.size(); k++) {
        EXPECT_DOUBLE_EQ(same.weight(k), d.weight(k));
    }
    EXPECT_THROW(condition(d, Event(std::vector<bool>(4, false))), ZeroProbabilityEvent);
}

TEST(Prob, ChshJointConditionedOnWinMatchesEnumeration) {
    Game g = chsh_game();
    auto s = tsirelson(1);
    auto joint = born_joint(g, 1, s);
    std::vector<int> S{0};
    auto w = win_set(g, 1, S, joint);
    auto c = condition(joint, w);
    EXPECT_NEAR(stable_sum(c.weights()), 1.0, 1e-12);
    auto oj = oracle::brute_joint(g, 1, s);
    double pw = oracle::prob_win(g, 1, oj, S);
    for (std::size_t k = 0; k < c.size(); k++) {
        int x = c.value(k, 0), y = c.value(k, 1), a = c.value(k, 2), b = c.value(k, 3);
        double expect = g.win(x, y, a, b) ? oj.at(x, y, a, b) / pw : 0.0;
        EXPECT_NEAR(c.weight(k), expect, 1e-12);
    }
}

TEST(Prob, MarginalExamples) {
    auto p = FiniteDistribution({{"P", 3}}, {0.2, 0.3, 0.5});
    auto q = FiniteDistribution({{"Q", 2}}, {0.9, 0.1});
    auto pq = product(p, q);
    auto mp = marginal(pq, {"P"});
    for (int k = 0; k < 3; k++) {
        EXPECT_NEAR(mp.weight(k), p.weight(k), 1e-15);
    }
    auto all = marginal(pq, {"P", "Q"});
    for (std::size_t k = 0; k < pq.size(); k++) {
        EXPECT_NEAR(all.weight(k), pq.weight(k), 1e-15);
    }
    // Reordering variables permutes the table.
    auto qp = marginal(pq, {"Q", "P"});
    EXPECT_NEAR(qp.weight(1 * 3 + 2), 0.1 * 0.5, 1e-15);
    EXPECT_THROW(marginal(pq, {"Z"}), std::invalid_argument);
}

TEST(Prob, TvExamples) {
    auto p = FiniteDistribution({{"X", 2}}, {0.5, 0.5});
    auto q = FiniteDistribution({{"X", 2}}, {0.75, 0.25});
    EXPECT_DOUBLE_EQ(tv_distance(p, p), 0.0);
    EXPECT_DOUBLE_EQ(tv_distance(FiniteDistribution({{"X", 2}}, {1, 0}), FiniteDistribution({{"X", 2}}, {0, 1})), 1.0);
    EXPECT_NEAR(tv_distance(p, q), 0.25, 1e-15);
    EXPECT_THROW(tv_distance(p, FiniteDistribution({{"Y", 2}}, {0.5, 0.5})), std::invalid_argument);
}

TEST(Prob, ProductExtendBuildsChainRule) {
    auto px = FiniteDistribution({{"X", 2}}, {0.25, 0.75});
    auto j = product_extend(px, {{"Y", 2}}, [](std::span<const int> x) {
        return x[0] == 0 ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.5, 0.5};
    });
    EXPECT_NEAR(j.weight(0), 0.25, 1e-15);
    EXPECT_NEAR(j.weight(1), 0.0, 1e-15);
    EXPECT_NEAR(j.weight(3), 0.375, 1e-15);
}

TEST(Prob, EventAlgebra) {
    auto d = bits2();
    auto a = Event::from_predicate(d, [&](std::size_t k) { return d.value(k, 0) == 1; });
    auto b = Event::from_predicate(d, [&](std::size_t k) { return d.value(k, 1) == 1; });
    EXPECT_EQ((a & b).count(), 1u);
    EXPECT_TRUE((a & b).subset_of(a));
    EXPECT_FALSE(a.subset_of(b));
    EXPECT_DOUBLE_EQ(probability(d, a & b), 0.25);
}

TEST(Prob, StableSumIsAccurate) {
    std::vector<double> v(1000000, 0.1);
    v.push_back(1e10);
    v.push_back(-1e10);
    EXPECT_NEAR(stable_sum(v), 100000.0, 1e-6);
}

TEST(Prob, SizeCapIsEnforced) {
    std::vector<Variable> big{{"A", 10000}, {"B", 10000}};
    EXPECT_THROW(assignment_count(big), std::length_error);
    EXPECT_THROW(FiniteDistribution::uniform(big), std::length_error);
    std::vector<Variable> ok{{"A", 1000}, {"B", 1000}};
    EXPECT_EQ(assignment_count(ok), 1000000u);
}

}  // namespace
}  // namespace parrep
