#pragma once

#include <Eigen/Dense>
#include <optional>

#include "hdts/error.hpp"

namespace hdts {

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
/// descending order. Each eigenvector carries the sign convention that its
/// entry of largest absolute value is nonnegative (ties broken by lowest
/// row index), which makes results deterministic across runs.
struct SpectralResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // column j pairs with eigenvalue j
};

/// Eigenpairs of a (possibly rank-deficient) pencil A b = lambda B b,
/// solved on the d-dimensional principal subspace of B. `eigenvectors`
/// holds the actual (complex) pencil eigenvectors; `basis` holds a real
/// matrix in which each complex-conjugate pair is replaced by the real and
/// imaginary parts of its representative, orthonormalized within the pair.
struct GeneralizedEigenResult {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  Eigen::MatrixXd basis;
};

/// Symmetric eigendecomposition. The input is symmetrized as (A + A^T)/2;
/// asymmetry beyond 1e-8 relative is rejected.
SpectralResult sym_eigen(const Eigen::Ref<const Eigen::MatrixXd>& matrix);

/// Ratio-based order estimator: argmin over i in [R] of
/// lambda_{i+1}/lambda_i with R = max(1, floor(fraction * len)), capped at
/// len - 1. Ties resolve to the smallest index; ratios whose numerator
/// eigenvalue is below machine precision relative to lambda_1 are treated
/// as 1 and excluded from competing.
int ratio_order(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                double fraction = 0.75);

/// Moore-Penrose inverse via SVD. Singular values below
/// max(rows, cols) * eps * sigma_1 are truncated, or exactly `rank` values
/// are kept when given.
Eigen::MatrixXd pseudo_inverse(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                               std::optional<int> rank = std::nullopt);

/// Inverse square root of a symmetric PSD matrix:
/// U diag((max(lambda_i, 0) + ridge)^{-1/2}) U^T. An unset ridge resolves
/// to 0 when the matrix is numerically positive definite and to
/// 1e-8 * trace/p otherwise. ridge = 0 on a singular matrix raises
/// SingularMatrix.
Eigen::MatrixXd inv_sqrt_psd(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                             std::optional<double> ridge = 0.0);

/// Solve A b = lambda B b for the top-d principal subspace of B: with
/// B = U Lambda U^T truncated to d terms, eigenvectors are
/// b = U Lambda^{-1/2} w for eigenvectors w of the projected problem.
/// Raises RankDeficientPencil when B has fewer than d eigenvalues above
/// tolerance. Eigenpairs are sorted by |lambda| descending (then by real
/// and imaginary part, conjugate +Im first).
GeneralizedEigenResult generalized_eigen(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::MatrixXd>& B, int rank);

}  // namespace hdts
