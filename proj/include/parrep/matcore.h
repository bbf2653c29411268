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

#ifndef PARREP_MATCORE_H
#define PARREP_MATCORE_H

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace parrep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

namespace tol {
inline constexpr double kHermitian = 1e-10;     // DensityMatrix entry deviation
inline constexpr double kNegativeEig = 1e-9;    // PSD clamping threshold
inline constexpr double kTrace = 1e-9;          // DensityMatrix trace
inline constexpr double kNorm = 1e-9;           // PureState norm
inline constexpr double kSqrtHermitian = 1e-8;  // mat_sqrt input check
inline constexpr double kPinvDefault = 1e-10;   // relative singular value cutoff
}  // namespace tol

/// A density matrix: Hermitian, PSD, unit trace. Validated at construction.
class DensityMatrix {
   public:
    explicit DensityMatrix(CMatrix m);

    const CMatrix &matrix() const {
        return m_;
    }
    int dim() const {
        return static_cast<int>(m_.rows());
    }

   private:
    CMatrix m_;
};

/// A unit vector in C^dim.
class PureState {
   public:
    explicit PureState(CVector amplitudes);

    const CVector &amplitudes() const {
        return v_;
    }
    int dim() const {
        return static_cast<int>(v_.size());
    }
    DensityMatrix projector() const;

   private:
    CVector v_;
};

/// psi = sum_k coefficients[k] * left_basis.col(k) (x) right_basis.col(k).
struct SchmidtDecomposition {
    RVector coefficients;
    CMatrix left_basis;
    CMatrix right_basis;

    CVector reconstruct() const;
};

/// Eigenpairs of a Hermitian matrix, sorted by descending eigenvalue. Near-equal
/// eigenvalues (within 1e-12) are ordered lexicographically by eigenvector
/// entries, and each eigenvector's first nonzero entry is real positive.
struct HermitianEigen {
    RVector values;
    CMatrix vectors;
};

HermitianEigen hermitian_eigen(const CMatrix &m);

/// Kronecker product.
CMatrix tensor(const CMatrix &a, const CMatrix &b);
CVector tensor(const CVector &a, const CVector &b);

/// Which tensor factor to trace out.
enum class TracedSide { kLeft, kRight };

/// Partial trace of an operator on C^dim_left (x) C^dim_right.
CMatrix partial_trace(const CMatrix &m, int dim_left, int dim_right, TracedSide traced);

/// PSD square root. Negative eigenvalues are clamped to zero; throws
/// std::invalid_argument when the input deviates from Hermitian by more
/// than 1e-8.
CMatrix mat_sqrt(const CMatrix &psd);

/// Moore-Penrose pseudoinverse. Singular values below rel_tol * sigma_max are
/// treated as zero.
CMatrix pinv(const CMatrix &m, double rel_tol = tol::kPinvDefault);

/// Unitary U such that U * m is positive semidefinite. Deterministic in m.
/// Returns the identity when m is already PSD.
CMatrix polar_psd_factor(const CMatrix &m);

SchmidtDecomposition schmidt(const PureState &psi, int dim_left, int dim_right);

struct StateMetrics {
    double trace_distance;
    double fidelity;
};

/// Trace distance 0.5*||rho - sigma||_1 and fidelity ||sqrt(rho) sqrt(sigma)||_1.
StateMetrics metrics(const DensityMatrix &rho, const DensityMatrix &sigma);

/// sum_j sqrt(lambda_j) |v_j>|v_j> for the eigendecomposition of rho.
PureState symmetric_purification(const DensityMatrix &rho);

// Small helpers shared by the verification suites.
double trace_norm(const CMatrix &m);
double hermitian_deviation(const CMatrix &m);
double min_hermitian_eigenvalue(const CMatrix &m);
bool is_psd(const CMatrix &m, double tolerance);
CMatrix projector(const CVector &v);
/// Y^T taken with respect to the orthonormal basis given by the columns of `basis`.
CMatrix transpose_in_basis(const CMatrix &y, const CMatrix &basis);
/// Reshape a vector on C^rows (x) C^cols into a rows x cols matrix (row index = left factor).
CMatrix unflatten(const CVector &v, int rows, int cols);
CVector flatten(const CMatrix &m);

// Seeded random generators (Gaussian ensembles).
CMatrix random_complex_matrix(Rng &rng, int rows, int cols);
CMatrix random_unitary(Rng &rng, int dim);
CVector random_state(Rng &rng, int dim);
/// Random PSD matrix of the given rank with unit trace.
CMatrix random_density(Rng &rng, int dim, int rank);
CMatrix random_psd(Rng &rng, int dim, int rank);

}  // namespace parrep

#endif
