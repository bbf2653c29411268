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

#include "parrep/matcore.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace parrep {

namespace {

void require_finite(const CMatrix &m, const char *what) {
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": non-finite entries");
    }
}

// Rotates v so that its first entry with magnitude above 1e-10 is real positive.
Complex normalize_phase(Eigen::Ref<CVector> v) {
    for (Eigen::Index k = 0; k < v.size(); k++) {
        double mag = std::abs(v[k]);
        if (mag > 1e-10) {
            Complex phase = std::conj(v[k]) / mag;
            v *= phase;
            v[k] = Complex(std::abs(v[k]), 0.0);
            return phase;
        }
    }
    return Complex(1.0, 0.0);
}

bool lex_less(const CVector &a, const CVector &b) {
    for (Eigen::Index k = 0; k < a.size(); k++) {
        if (a[k].real() != b[k].real()) {
            return a[k].real() < b[k].real();
        }
        if (a[k].imag() != b[k].imag()) {
            return a[k].imag() < b[k].imag();
        }
    }
    return false;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw std::invalid_argument("DensityMatrix: matrix must be square and nonempty");
    }
    require_finite(m_, "DensityMatrix");
    if (hermitian_deviation(m_) > tol::kHermitian) {
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    }
    if (std::abs(m_.trace().real() - 1.0) > tol::kTrace) {
        throw std::invalid_argument("DensityMatrix: trace differs from 1");
    }
    if (min_hermitian_eigenvalue(m_) < -tol::kNegativeEig) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue");
    }
}

PureState::PureState(CVector amplitudes) : v_(std::move(amplitudes)) {
    if (v_.size() == 0) {
        throw std::invalid_argument("PureState: empty vector");
    }
    if (!v_.allFinite()) {
        throw std::invalid_argument("PureState: non-finite amplitudes");
    }
    if (std::abs(v_.norm() - 1.0) > tol::kNorm) {
        throw std::invalid_argument("PureState: norm differs from 1");
    }
}

DensityMatrix PureState::projector() const {
    return DensityMatrix(parrep::projector(v_));
}

CVector SchmidtDecomposition::reconstruct() const {
    CVector out = CVector::Zero(left_basis.rows() * right_basis.rows());
    for (Eigen::Index k = 0; k < coefficients.size(); k++) {
        out += coefficients[k] * tensor(CVector(left_basis.col(k)), CVector(right_basis.col(k)));
    }
    return out;
}

HermitianEigen hermitian_eigen(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermitian_eigen: matrix must be square");
    }
    CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigen: eigensolver failed");
    }
    const auto n = h.rows();
    std::vector<CVector> vecs(n);
    std::vector<double> vals(n);
    for (Eigen::Index k = 0; k < n; k++) {
        vals[k] = solver.eigenvalues()[k];
        vecs[k] = solver.eigenvectors().col(k);
        normalize_phase(vecs[k]);
    }
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return vals[a] > vals[b];
    });
    // Within runs of numerically equal eigenvalues, order by eigenvector entries.
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index end = start + 1;
        while (end < n && std::abs(vals[order[end]] - vals[order[start]]) <= 1e-12) {
            end++;
        }
        std::sort(order.begin() + start, order.begin() + end, [&](auto a, auto b) {
            return lex_less(vecs[a], vecs[b]);
        });
        start = end;
    }
    HermitianEigen out{RVector(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; k++) {
        out.values[k] = vals[order[k]];
        out.vectors.col(k) = vecs[order[k]];
    }
    return out;
}

CMatrix tensor(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CVector tensor(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); i++) {
        out.segment(i * b.size(), b.size()) = a[i] * b;
    }
    return out;
}

CMatrix partial_trace(const CMatrix &m, int dim_left, int dim_right, TracedSide traced) {
    if (dim_left <= 0 || dim_right <= 0 || m.rows() != m.cols() ||
        m.rows() != static_cast<Eigen::Index>(dim_left) * dim_right) {
        throw std::invalid_argument("partial_trace: dimension mismatch");
    }
    if (traced == TracedSide::kRight) {
        CMatrix out = CMatrix::Zero(dim_left, dim_left);
        for (int i = 0; i < dim_left; i++) {
            for (int j = 0; j < dim_left; j++) {
                Complex acc = 0;
                for (int k = 0; k < dim_right; k++) {
                    acc += m(i * dim_right + k, j * dim_right + k);
                }
                out(i, j) = acc;
            }
        }
        return out;
    }
    CMatrix out = CMatrix::Zero(dim_right, dim_right);
    for (int k = 0; k < dim_left; k++) {
        out += m.block(k * dim_right, k * dim_right, dim_right, dim_right);
    }
    return out;
}

CMatrix mat_sqrt(const CMatrix &psd) {
    if (psd.rows() != psd.cols()) {
        throw std::invalid_argument("mat_sqrt: matrix must be square");
    }
    if (hermitian_deviation(psd) > tol::kSqrtHermitian) {
        throw std::invalid_argument("mat_sqrt: input is not Hermitian");
    }
    auto eig = hermitian_eigen(psd);
    RVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
    return eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
}

CMatrix pinv(const CMatrix &m, double rel_tol) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector &s = svd.singularValues();
    CMatrix out = CMatrix::Zero(m.cols(), m.rows());
    if (s.size() == 0 || s[0] == 0.0) {
        return out;
    }
    double cutoff = rel_tol * s[0];
    for (Eigen::Index k = 0; k < s.size(); k++) {
        if (s[k] > cutoff) {
            out += svd.matrixV().col(k) * (1.0 / s[k]) * svd.matrixU().col(k).adjoint();
        }
    }
    return out;
}

CMatrix polar_psd_factor(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("polar_psd_factor: matrix must be square");
    }
    const auto n = m.rows();
    if (hermitian_deviation(m) <= 1e-12 && min_hermitian_eigenvalue(m) >= -1e-12) {
        return CMatrix::Identity(n, n);
    }
    // m = W S V^dagger  =>  (V W^dagger) m = V S V^dagger.
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixV() * svd.matrixU().adjoint();
}

SchmidtDecomposition schmidt(const PureState &psi, int dim_left, int dim_right) {
    if (static_cast<Eigen::Index>(dim_left) * dim_right != psi.dim()) {
        throw std::invalid_argument("schmidt: dimension mismatch");
    }
    CMatrix mat = unflatten(psi.amplitudes(), dim_left, dim_right);
    Eigen::JacobiSVD<CMatrix> svd(mat, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int r = std::min(dim_left, dim_right);
    SchmidtDecomposition out;
    out.coefficients = svd.singularValues().head(r);
    out.left_basis = svd.matrixU().leftCols(r);
    out.right_basis = svd.matrixV().leftCols(r).conjugate();
    for (int k = 0; k < r; k++) {
        CVector col = out.left_basis.col(k);
        Complex phase = normalize_phase(col);
        out.left_basis.col(k) = col;
        out.right_basis.col(k) *= std::conj(phase);
    }
    return out;
}

StateMetrics metrics(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("metrics: dimension mismatch");
    }
    double td = 0.5 * trace_norm(rho.matrix() - sigma.matrix());
    double fid = trace_norm(mat_sqrt(rho.matrix()) * mat_sqrt(sigma.matrix()));
    return {std::clamp(td, 0.0, 1.0), std::clamp(fid, 0.0, 1.0)};
}

PureState symmetric_purification(const DensityMatrix &rho) {
    auto eig = hermitian_eigen(rho.matrix());
    const int d = rho.dim();
    CVector psi = CVector::Zero(static_cast<Eigen::Index>(d) * d);
    for (int j = 0; j < d; j++) {
        double lam = std::max(eig.values[j], 0.0);
        if (lam == 0.0) {
            continue;
        }
        CVector v = eig.vectors.col(j);
        psi += std::sqrt(lam) * tensor(v, v);
    }
    psi /= psi.norm();
    return PureState(psi);
}

double trace_norm(const CMatrix &m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues().sum();
}

double hermitian_deviation(const CMatrix &m) {
    if (m.rows() != m.cols()) {
        return INFINITY;
    }
    if (m.size() == 0) {
        return 0.0;
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_hermitian_eigenvalue(const CMatrix &m) {
    CMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()[0];
}

bool is_psd(const CMatrix &m, double tolerance) {
    return hermitian_deviation(m) <= tolerance && min_hermitian_eigenvalue(m) >= -tolerance;
}

CMatrix projector(const CVector &v) {
    return v * v.adjoint();
}

CMatrix transpose_in_basis(const CMatrix &y, const CMatrix &basis) {
    return basis * (basis.adjoint() * y * basis).transpose() * basis.adjoint();
}

CMatrix unflatten(const CVector &v, int rows, int cols) {
    CMatrix out(rows, cols);
    for (int i = 0; i < rows; i++) {
        for (int j = 0; j < cols; j++) {
            out(i, j) = v[static_cast<Eigen::Index>(i) * cols + j];
        }
    }
    return out;
}

CVector flatten(const CMatrix &m) {
    CVector out(m.size());
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            out[i * m.cols() + j] = m(i, j);
        }
    }
    return out;
}

CMatrix random_complex_matrix(Rng &rng, int rows, int cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix out(rows, cols);
    for (int i = 0; i < rows; i++) {
        for (int j = 0; j < cols; j++) {
            double re = g(rng);
            double im = g(rng);
            out(i, j) = Complex(re, im);
        }
    }
    return out;
}

CMatrix random_unitary(Rng &rng, int dim) {
    CMatrix z = random_complex_matrix(rng, dim, dim);
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < dim; k++) {
        double mag = std::abs(r(k, k));
        if (mag > 0) {
            q.col(k) *= r(k, k) / mag;
        }
    }
    return q;
}

CVector random_state(Rng &rng, int dim) {
    CVector v = random_complex_matrix(rng, dim, 1).col(0);
    return v / v.norm();
}

CMatrix random_psd(Rng &rng, int dim, int rank) {
    CMatrix g = random_complex_matrix(rng, dim, rank);
    return g * g.adjoint();
}

CMatrix random_density(Rng &rng, int dim, int rank) {
    CMatrix p = random_psd(rng, dim, rank);
    CMatrix out = p / p.trace().real();
    return 0.5 * (out + out.adjoint());
}

}  // namespace parrep
