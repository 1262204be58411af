#include "hdts/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

namespace hdts {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void sign_normalize_column(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {  // strict: ties keep the lowest row index
      best = a;
      imax = i;
    }
  }
  if (v(imax) < 0.0) v = -v;
}

// Rotate a complex vector so its largest-modulus entry is real and
// nonnegative; makes complex eigenvectors deterministic up to solver output.
void phase_normalize_column(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best) {
      best = a;
      imax = i;
    }
  }
  if (best > 0.0) {
    const std::complex<double> phase = v(imax) / std::abs(v(imax));
    v /= phase;
  }
}

}  // namespace

SpectralResult sym_eigen(const Eigen::Ref<const Eigen::MatrixXd>& matrix) {
  if (matrix.rows() != matrix.cols()) {
    fail(ErrorKind::ShapeError, "sym_eigen requires a square matrix");
  }
  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * scale) {
    fail(ErrorKind::NotSymmetric, "matrix asymmetry " + std::to_string(asym) +
                                      " exceeds tolerance");
  }
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NumericalFailure, "symmetric eigensolver did not converge");
  }

  const Eigen::Index p = matrix.rows();
  SpectralResult out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Eigen::Index j = 0; j < p; ++j) {
    sign_normalize_column(out.eigenvectors.col(j));
  }
  return out;
}

int ratio_order(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                double fraction) {
  const Eigen::Index len = eigenvalues.size();
  if (len < 2) fail(ErrorKind::ShapeError, "ratio_order needs at least 2 eigenvalues");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "fraction must lie in (0, 1]");
  }
  const double lambda1 = eigenvalues(0);
  if (!(lambda1 > 0.0)) {
    fail(ErrorKind::DegenerateSpectrum, "all eigenvalues are zero");
  }
  Eigen::Index R = static_cast<Eigen::Index>(std::floor(fraction * double(len)));
  R = std::clamp<Eigen::Index>(R, 1, len - 1);

  const double floor_value = kEps * lambda1;
  int best_i = 1;
  double best_ratio = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i <= R; ++i) {
    const double num = eigenvalues(i);      // lambda_{i+1}, 0-based index i
    const double den = eigenvalues(i - 1);  // lambda_i
    const double ratio = (den <= floor_value) ? 1.0 : num / den;
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_i = static_cast<int>(i);
    }
  }
  return best_i;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                               std::optional<int> rank) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index keep;
  if (rank) {
    if (*rank < 0 || *rank > sv.size()) {
      fail(ErrorKind::InvalidArgument, "pseudo_inverse rank out of range");
    }
    keep = *rank;
  } else {
    const double tol =
        double(std::max(matrix.rows(), matrix.cols())) * kEps * (sv.size() ? sv(0) : 0.0);
    keep = 0;
    while (keep < sv.size() && sv(keep) > tol) ++keep;
  }
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < keep; ++i) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd inv_sqrt_psd(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                             std::optional<double> ridge) {
  const SpectralResult eig = sym_eigen(matrix);
  const Eigen::Index p = matrix.rows();
  const double lambda_max = eig.eigenvalues(0);
  const double lambda_min = eig.eigenvalues(p - 1);
  if (lambda_min < -1e-8 * std::max(1.0, lambda_max)) {
    fail(ErrorKind::InvalidData, "matrix is not positive semidefinite");
  }

  double r;
  if (ridge) {
    r = *ridge;
    if (r < 0.0) fail(ErrorKind::InvalidArgument, "ridge must be nonnegative");
  } else {
    const bool pd = lambda_min > double(p) * kEps * std::max(lambda_max, 0.0);
    r = pd ? 0.0 : 1e-8 * matrix.trace() / double(p);
  }
  if (r == 0.0 && lambda_min <= 0.0) {
    fail(ErrorKind::SingularMatrix,
         "matrix is singular and no ridge was supplied");
  }

  Eigen::VectorXd scaled(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    scaled(i) = 1.0 / std::sqrt(std::max(eig.eigenvalues(i), 0.0) + r);
  }
  Eigen::MatrixXd out =
      eig.eigenvectors * scaled.asDiagonal() * eig.eigenvectors.transpose();
  return 0.5 * (out + out.transpose());
}

GeneralizedEigenResult generalized_eigen(
    const Eigen::Ref<const Eigen::MatrixXd>& A,
    const Eigen::Ref<const Eigen::MatrixXd>& B, int rank) {
  const Eigen::Index q = A.rows();
  if (A.cols() != q || B.rows() != q || B.cols() != q) {
    fail(ErrorKind::ShapeError, "pencil matrices must be square and conformable");
  }
  if (rank < 1 || rank > q) {
    fail(ErrorKind::InvalidArgument, "pencil rank out of range");
  }

  const SpectralResult beig = sym_eigen(B);
  const double lambda_max = std::max(beig.eigenvalues(0), 0.0);
  const double tol = double(q) * kEps * lambda_max;
  Eigen::Index available = 0;
  while (available < q && beig.eigenvalues(available) > tol) ++available;
  if (available < rank) {
    fail(ErrorKind::RankDeficientPencil,
         "B has rank " + std::to_string(available) + " < requested " +
             std::to_string(rank));
  }

  const Eigen::Index d = rank;
  const Eigen::MatrixXd U = beig.eigenvectors.leftCols(d);
  const Eigen::VectorXd lam_inv_sqrt =
      beig.eigenvalues.head(d).cwiseSqrt().cwiseInverse();

  const Eigen::MatrixXd M = lam_inv_sqrt.asDiagonal() * (U.transpose() * A * U) *
                            lam_inv_sqrt.asDiagonal();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::NumericalFailure, "pencil eigensolver did not converge");
  }

  // Map projected eigenvectors back and order deterministically.
  Eigen::MatrixXcd vectors = U * lam_inv_sqrt.asDiagonal() * solver.eigenvectors();
  Eigen::VectorXcd values = solver.eigenvalues();
  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ma = std::abs(values(a)), mb = std::abs(values(b));
    if (ma != mb) return ma > mb;
    if (values(a).real() != values(b).real())
      return values(a).real() > values(b).real();
    return values(a).imag() > values(b).imag();
  });

  GeneralizedEigenResult out;
  out.eigenvalues.resize(d);
  out.eigenvectors.resize(q, d);
  out.basis.resize(q, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    out.eigenvalues(j) = values(order[j]);
    Eigen::VectorXcd v = vectors.col(order[j]);
    v.normalize();
    phase_normalize_column(v);
    out.eigenvectors.col(j) = v;
  }

  // Real basis: real eigenvectors pass through; each conjugate pair
  // contributes (Re, Im) of its +Im representative, orthonormalized
  // within the pair.
  Eigen::Index j = 0;
  while (j < d) {
    const std::complex<double> lam = out.eigenvalues(j);
    const double im_tol = 1e-12 * (1.0 + std::abs(lam));
    const bool is_complex =
        std::abs(lam.imag()) > im_tol && j + 1 < d &&
        std::abs(out.eigenvalues(j + 1) - std::conj(lam)) <=
            1e-8 * (1.0 + std::abs(lam));
    if (is_complex) {
      Eigen::VectorXd re = out.eigenvectors.col(j).real();
      Eigen::VectorXd im = out.eigenvectors.col(j).imag();
      re.normalize();
      im -= re.dot(im) * re;
      const double nrm = im.norm();
      if (nrm > 0.0) im /= nrm;
      sign_normalize_column(re);
      sign_normalize_column(im);
      out.basis.col(j) = re;
      out.basis.col(j + 1) = im;
      j += 2;
    } else {
      Eigen::VectorXd re = out.eigenvectors.col(j).real();
      const double nrm = re.norm();
      if (nrm > 0.0) re /= nrm;
      sign_normalize_column(re);
      out.basis.col(j) = re;
      ++j;
    }
  }
  return out;
}

}  // namespace hdts
