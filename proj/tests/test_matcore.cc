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
#include "parrep/matcore.h"

namespace parrep {
namespace {

CMatrix diag(std::initializer_list<double> v) {
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
    int k = 0;
    for (double x : v) {
        m(k, k) = x;
        k++;
    }
    return m;
}

CVector bell() {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    return v;
}

TEST(Matcore, DensityMatrixValidation) {
    EXPECT_NO_THROW(DensityMatrix(diag({0.5, 0.5})));
    EXPECT_THROW(DensityMatrix(diag({0.6, 0.5})), std::invalid_argument);
    EXPECT_THROW(DensityMatrix(diag({1.5, -0.5})), std::invalid_argument);
    CMatrix nonherm = diag({0.5, 0.5});
    nonherm(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix{nonherm}, std::invalid_argument);
    CVector v = CVector::Zero(2);
    v(0) = 2.0;
    EXPECT_THROW(PureState{v}, std::invalid_argument);
}

TEST(Matcore, TensorExamples) {
    EXPECT_LE((tensor(CMatrix(CMatrix::Identity(2, 2)), CMatrix(CMatrix::Identity(2, 2))) - CMatrix::Identity(4, 4)).norm(), 0.0);
    CMatrix three(1, 1);
    three(0, 0) = 3.0;
    EXPECT_LE((tensor(diag({1, 2}), three) - diag({3, 6})).norm(), 0.0);
}

TEST(Matcore, TensorMatchesLoopOracle) {
    Rng rng(11);
    for (int t = 0; t < 20; t++) {
        CMatrix a = random_complex_matrix(rng, 2 + t % 2, 3);
        CMatrix b = random_complex_matrix(rng, 3, 1 + t % 3);
        EXPECT_LE((tensor(a, b) - oracle::kron(a, b)).norm(), 1e-12);
    }
}

TEST(Matcore, PartialTraceExamples) {
    Rng rng(5);
    CMatrix rho = random_density(rng, 2, 2), sigma = random_density(rng, 3, 3);
    CMatrix prod = tensor(rho, sigma);
    EXPECT_LE((partial_trace(prod, 2, 3, TracedSide::kRight) - rho * sigma.trace()).norm(), 1e-12);
    EXPECT_LE((partial_trace(prod, 2, 3, TracedSide::kLeft) - sigma * rho.trace()).norm(), 1e-12);
    CMatrix b = projector(bell());
    EXPECT_LE((partial_trace(b, 2, 2, TracedSide::kLeft) - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-12);
    EXPECT_LE((partial_trace(b, 2, 2, TracedSide::kRight) - 0.5 * CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Matcore, PartialTraceMatchesLoopOracle) {
    Rng rng(7);
    const int da = 3, db = 2;
    CMatrix m = random_complex_matrix(rng, da * db, da * db);
    CMatrix left = CMatrix::Zero(db, db), right = CMatrix::Zero(da, da);
    for (int i = 0; i < da; i++) {
        for (int j = 0; j < da; j++) {
            for (int k = 0; k < db; k++) {
                right(i, j) += m(i * db + k, j * db + k);
            }
        }
    }
    for (int k = 0; k < db; k++) {
        for (int l = 0; l < db; l++) {
            for (int i = 0; i < da; i++) {
                left(k, l) += m(i * db + k, i * db + l);
            }
        }
    }
    EXPECT_LE((partial_trace(m, da, db, TracedSide::kRight) - right).norm(), 1e-12);
    EXPECT_LE((partial_trace(m, da, db, TracedSide::kLeft) - left).norm(), 1e-12);
}

TEST(Matcore, MatSqrt) {
    EXPECT_LE((mat_sqrt(diag({4, 9})) - diag({2, 3})).norm(), 1e-12);
    EXPECT_LE((mat_sqrt(CMatrix::Identity(3, 3)) - CMatrix::Identity(3, 3)).norm(), 1e-12);
    Rng rng(3);
    for (int t = 0; t < 10; t++) {
        CMatrix p = random_psd(rng, 4, 1 + t % 4);
        CMatrix r = mat_sqrt(p);
        EXPECT_LE((r * r - p).norm(), 1e-10);
        EXPECT_LE(hermitian_deviation(r), 1e-12);
        EXPECT_GE(min_hermitian_eigenvalue(r), -1e-12);
    }
    CMatrix bad = diag({1, 1});
    bad(0, 1) = 0.5;
    EXPECT_THROW(mat_sqrt(bad), std::invalid_argument);
}

TEST(Matcore, PseudoinverseIdentities) {
    EXPECT_LE((pinv(diag({2, 0})) - diag({0.5, 0})).norm(), 1e-14);
    Rng rng(9);
    CMatrix u = random_unitary(rng, 3);
    EXPECT_LE((pinv(u) - u.adjoint()).norm(), 1e-12);
    for (int t = 0; t < 10; t++) {
        CMatrix m = random_complex_matrix(rng, 4, 2) * random_complex_matrix(rng, 2, 3);
        CMatrix p = pinv(m);
        // Moore-Penrose conditions.
        EXPECT_LE((m * p * m - m).norm(), 1e-10);
        EXPECT_LE((p * m * p - p).norm(), 1e-10);
        EXPECT_LE(hermitian_deviation(m * p), 1e-10);
        EXPECT_LE(hermitian_deviation(p * m), 1e-10);
    }
}

TEST(Matcore, PolarFactor) {
    CMatrix psd = diag({1, 2});
    EXPECT_LE((polar_psd_factor(psd) - CMatrix::Identity(2, 2)).norm(), 1e-12);
    CMatrix neg(1, 1);
    neg(0, 0) = -1.0;
    CMatrix u = polar_psd_factor(neg);
    EXPECT_NEAR(u(0, 0).real(), -1.0, 1e-12);
    EXPECT_NEAR((u * neg)(0, 0).real(), 1.0, 1e-12);
    Rng rng(21);
    for (int t = 0; t < 10; t++) {
        CMatrix m = random_complex_matrix(rng, 3, 3);
        CMatrix w = polar_psd_factor(m);
        EXPECT_LE((w.adjoint() * w - CMatrix::Identity(3, 3)).norm(), 1e-10);
        CMatrix wm = w * m;
        EXPECT_LE(hermitian_deviation(wm), 1e-10);
        EXPECT_GE(min_hermitian_eigenvalue(wm), -1e-10);
        EXPECT_LE((polar_psd_factor(m) - w).norm(), 0.0);
    }
}

TEST(Matcore, SchmidtExamples) {
    auto sd = schmidt(PureState(bell()), 2, 2);
    EXPECT_NEAR(sd.coefficients(0), 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(sd.coefficients(1), 1 / std::sqrt(2.0), 1e-12);
    CVector e01 = CVector::Zero(4);
    e01(1) = 1.0;
    auto p = schmidt(PureState(e01), 2, 2);
    EXPECT_NEAR(p.coefficients(0), 1.0, 1e-12);
    EXPECT_NEAR(p.coefficients(1), 0.0, 1e-12);
    Rng rng(4);
    for (int t = 0; t < 10; t++) {
        PureState psi(random_state(rng, 6));
        auto s = schmidt(psi, 2, 3);
        EXPECT_LE((s.reconstruct() - psi.amplitudes()).norm(), 1e-10);
        // Squared coefficients are the spectrum of the reduced state.
        CMatrix red = partial_trace(projector(psi.amplitudes()), 2, 3, TracedSide::kRight);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(red);
        EXPECT_NEAR(es.eigenvalues()(1), s.coefficients(0) * s.coefficients(0), 1e-10);
        EXPECT_NEAR(es.eigenvalues()(0), s.coefficients(1) * s.coefficients(1), 1e-10);
    }
}

TEST(Matcore, HermitianEigenOrderedAndNormalized) {
    Rng rng(2);
    CMatrix h = random_psd(rng, 4, 4);
    auto e = hermitian_eigen(h);
    for (int k = 0; k + 1 < 4; k++) {
        EXPECT_GE(e.values(k), e.values(k + 1));
    }
    EXPECT_LE((e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - h).norm(), 1e-10);
}

TEST(Matcore, MetricsExamples) {
    DensityMatrix rho(diag({0.3, 0.7}));
    auto same = metrics(rho, rho);
    EXPECT_NEAR(same.trace_distance, 0.0, 1e-12);
    EXPECT_NEAR(same.fidelity, 1.0, 1e-10);
    auto orth = metrics(DensityMatrix(diag({1, 0})), DensityMatrix(diag({0, 1})));
    EXPECT_NEAR(orth.trace_distance, 1.0, 1e-12);
    EXPECT_NEAR(orth.fidelity, 0.0, 1e-10);
}

TEST(Matcore, PureStateMetricsMatchOverlapFormulas) {
    Rng rng(13);
    for (int t = 0; t < 20; t++) {
        CVector v = random_state(rng, 3), w = random_state(rng, 3);
        double ov = std::abs(v.dot(w));
        auto m = metrics(DensityMatrix(projector(v)), DensityMatrix(projector(w)));
        EXPECT_NEAR(m.fidelity, ov, 1e-7);
        EXPECT_NEAR(m.trace_distance, std::sqrt(std::max(0.0, 1 - ov * ov)), 1e-7);
    }
}

TEST(Matcore, SymmetricPurification) {
    auto p = symmetric_purification(DensityMatrix(0.5 * CMatrix::Identity(2, 2)));
    EXPECT_NEAR(std::abs(p.amplitudes().dot(bell())), 1.0, 1e-12);
    auto q = symmetric_purification(DensityMatrix(diag({1, 0})));
    EXPECT_NEAR(std::abs(q.amplitudes()(0)), 1.0, 1e-12);
    Rng rng(17);
    CMatrix rho = random_density(rng, 3, 2);
    auto s = symmetric_purification(DensityMatrix(rho));
    EXPECT_LE((partial_trace(projector(s.amplitudes()), 3, 3, TracedSide::kRight) - rho).norm(), 1e-10);
}

TEST(Matcore, TransposeInStandardBasisIsTranspose) {
    Rng rng(1);
    CMatrix y = random_complex_matrix(rng, 3, 3);
    EXPECT_LE((transpose_in_basis(y, CMatrix::Identity(3, 3)) - y.transpose()).norm(), 1e-12);
    CMatrix u = random_unitary(rng, 3);
    // Transposing twice in any basis is the identity map.
    EXPECT_LE((transpose_in_basis(transpose_in_basis(y, u), u) - y).norm(), 1e-10);
}

TEST(Matcore, FlattenRoundTrip) {
    Rng rng(8);
    CVector v = random_state(rng, 6);
    CMatrix m = unflatten(v, 2, 3);
    EXPECT_EQ(m(1, 2), v(5));
    EXPECT_LE((flatten(m) - v).norm(), 0.0);
}

TEST(Matcore, SeededGeneratorsAreDeterministic) {
    Rng a(99), b(99);
    EXPECT_LE((random_unitary(a, 4) - random_unitary(b, 4)).norm(), 0.0);
    Rng c(5);
    CMatrix rho = random_density(c, 4, 2);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_TRUE(is_psd(rho, 1e-12));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
    EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues()(1), 0.0, 1e-12);
}

}  // namespace
}  // namespace parrep
