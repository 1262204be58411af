#include "hdts/cp.hpp"

#include <algorithm>
#include <cmath>

#include "hdts/dgp.hpp"
#include "hdts/forecast.hpp"
#include "hdts/spectral.hpp"

namespace hdts {

MatrixSeries::MatrixSeries(Eigen::MatrixXd vecs, Eigen::Index p, Eigen::Index q)
    : vecs_(std::move(vecs)), p_(p), q_(q) {
  if (p_ < 2 || q_ < 2 || vecs_.cols() < 3 || vecs_.rows() != p_ * q_) {
    fail(ErrorKind::InvalidData,
         "matrix series needs n >= 3, p >= 2, q >= 2 with consistent storage");
  }
  if (!vecs_.allFinite()) {
    fail(ErrorKind::InvalidData, "matrix series contains non-finite values");
  }
}

MatrixSeries::MatrixSeries(const std::vector<Eigen::MatrixXd>& slices) {
  if (slices.empty()) fail(ErrorKind::InvalidData, "matrix series is empty");
  p_ = slices.front().rows();
  q_ = slices.front().cols();
  vecs_.resize(p_ * q_, Eigen::Index(slices.size()));
  for (std::size_t t = 0; t < slices.size(); ++t) {
    if (slices[t].rows() != p_ || slices[t].cols() != q_) {
      fail(ErrorKind::ShapeError, "slice " + std::to_string(t) + " has wrong shape");
    }
    vecs_.col(Eigen::Index(t)) =
        Eigen::Map<const Eigen::VectorXd>(slices[t].data(), p_ * q_);
  }
  *this = MatrixSeries(std::move(vecs_), p_, q_);
}

MatrixSeries MatrixSeries::transposed() const {
  Eigen::MatrixXd out(p_ * q_, n());
  for (Eigen::Index t = 0; t < n(); ++t) {
    const Eigen::MatrixXd st = slice(t).transpose();
    out.col(t) = Eigen::Map<const Eigen::VectorXd>(st.data(), p_ * q_);
  }
  return MatrixSeries(std::move(out), q_, p_);
}

Eigen::VectorXd default_xi(const MatrixSeries& series) {
  const Eigen::Index n = series.n();
  const Eigen::MatrixXd vc = series.vecs().colwise() - series.vecs().rowwise().mean();
  // Leading eigenvector of the vec covariance via the n x n Gram matrix.
  const Eigen::MatrixXd gram = vc.transpose() * vc / double(n);
  const SpectralResult eig = sym_eigen(gram);
  if (eig.eigenvalues(0) <= 0.0) {
    fail(ErrorKind::DegenerateXi, "series is constant; no projection direction");
  }
  Eigen::VectorXd v = vc * eig.eigenvectors.col(0);
  v.normalize();
  // deterministic sign
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
  Eigen::VectorXd xi = vc.transpose() * v;
  xi.array() -= xi.mean();
  return xi;
}

Eigen::MatrixXd sigma_y_xi(const MatrixSeries& series,
                           const Eigen::Ref<const Eigen::VectorXd>& xi, int k,
                           double delta) {
  const Eigen::Index n = series.n();
  if (xi.size() != n) fail(ErrorKind::ShapeError, "xi length differs from n");
  if (k < 1 || k > n - 2) {
    fail(ErrorKind::LagOutOfRange, "lag " + std::to_string(k) + " out of range");
  }
  const Eigen::VectorXd ybar = series.vecs().rowwise().mean();
  const Eigen::VectorXd xic = xi.array() - xi.mean();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(series.p() * series.q());
  for (Eigen::Index t = k; t < n; ++t) {
    acc += (series.vecs().col(t) - ybar) * xic(t - k);
  }
  acc /= double(n - k);
  Eigen::MatrixXd out =
      Eigen::Map<const Eigen::MatrixXd>(acc.data(), series.p(), series.q());
  return hard_threshold(out, delta);
}

namespace {

double resolve_cp_delta(const MatrixSeries& series, bool thresh,
                        const std::optional<double>& delta) {
  if (!thresh) return 0.0;
  if (delta) return *delta;
  return 2.0 * std::sqrt(std::log(double(series.p() * series.q())) /
                         double(series.n()));
}

void sign_normalize_columns(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index imax = 0;
    m.col(j).cwiseAbs().maxCoeff(&imax);
    if (m(imax, j) < 0.0) m.col(j) = -m.col(j);
  }
}

Eigen::MatrixXd rank_one_atoms(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::Index p = A.rows(), q = B.rows(), d = A.cols();
  Eigen::MatrixXd atoms(p * q, d);
  for (Eigen::Index l = 0; l < d; ++l) {
    const Eigen::MatrixXd outer = A.col(l) * B.col(l).transpose();
    atoms.col(l) = Eigen::Map<const Eigen::VectorXd>(outer.data(), p * q);
  }
  return atoms;
}

// Least squares of the centered vec(Y_t) on the d rank-one atoms.
Eigen::MatrixXd recover_factors(const MatrixSeries& series,
                                const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& B) {
  const Eigen::MatrixXd atoms = rank_one_atoms(A, B);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(atoms);
  if (qr.rank() < atoms.cols()) {
    fail(ErrorKind::NumericalFailure, "rank-one atoms are collinear");
  }
  const Eigen::MatrixXd vc =
      series.vecs().colwise() - series.vecs().rowwise().mean();
  return qr.solve(vc).transpose();  // n x d
}

Eigen::VectorXd normalized_or_fail(const Eigen::VectorXd& v, const char* what) {
  const double nrm = v.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    fail(ErrorKind::NumericalFailure, std::string("degenerate ") + what);
  }
  return v / nrm;
}

CpFit cp_direct_core(const MatrixSeries& series, const CpOptions& options) {
  const double delta1 = resolve_cp_delta(series, options.thresh1, options.delta1);
  const Eigen::VectorXd xi = options.xi ? *options.xi : default_xi(series);

  const Eigen::MatrixXd sigma1 = sigma_y_xi(series, xi, 1, delta1);
  const Eigen::MatrixXd sigma2 = sigma_y_xi(series, xi, 2, delta1);
  const Eigen::MatrixXd k1 = sigma1.transpose() * sigma1;  // q x q
  const Eigen::MatrixXd k2 = sigma1.transpose() * sigma2;

  const SpectralResult k1_eig = sym_eigen(k1);
  const int d = ratio_order(k1_eig.eigenvalues.cwiseMax(0.0), 0.75);

  const GeneralizedEigenResult pencil = generalized_eigen(k2, k1, d);

  Eigen::MatrixXd A(series.p(), d);
  for (int l = 0; l < d; ++l) {
    A.col(l) = normalized_or_fail(sigma1 * pencil.basis.col(l), "loading atom");
  }
  const Eigen::MatrixXd a_dual = pseudo_inverse(A);  // d x p, rows a^l
  Eigen::MatrixXd B(series.q(), d);
  for (int l = 0; l < d; ++l) {
    B.col(l) =
        normalized_or_fail(sigma1.transpose() * a_dual.row(l).transpose(),
                           "dual loading atom");
  }

  sign_normalize_columns(A);
  sign_normalize_columns(B);

  CpFit fit;
  fit.method = CpMethod::direct;
  fit.rank = d;
  fit.A = std::move(A);
  fit.B = std::move(B);
  fit.factors = recover_factors(series, fit.A, fit.B);
  return fit;
}

detail::RefinedIntermediates compute_refined_intermediates(
    const MatrixSeries& series, const CpOptions& options) {
  const Eigen::Index n = series.n();
  const Eigen::Index p = series.p();
  const Eigen::Index q = series.q();
  if (options.lag_k < 2 || options.lag_k > n - 2) {
    fail(ErrorKind::LagOutOfRange, "refined method needs 2 <= K <= n-2");
  }
  const double delta1 = resolve_cp_delta(series, options.thresh1, options.delta1);
  const double delta2 = resolve_cp_delta(series, options.thresh2, options.delta2);
  const Eigen::VectorXd xi = options.xi ? *options.xi : default_xi(series);

  Eigen::MatrixXd m1 = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(q, q);
  for (int k = 1; k <= options.lag_k; ++k) {
    const Eigen::MatrixXd sk = sigma_y_xi(series, xi, k, delta1);
    m1.noalias() += sk * sk.transpose();
    m2.noalias() += sk.transpose() * sk;
  }

  const SpectralResult m1_eig = sym_eigen(m1);
  const SpectralResult m2_eig = sym_eigen(m2);
  const int d = ratio_order(m1_eig.eigenvalues.cwiseMax(0.0), 0.75);
  if (d >= q) {
    fail(ErrorKind::NumericalFailure,
         "estimated rank " + std::to_string(d) + " violates d < min(p, q)");
  }
  if (m2_eig.eigenvalues(d - 1) <= 0.0) {
    fail(ErrorKind::RefinementSingular, "right subspace rank below d");
  }

  detail::RefinedIntermediates out;
  out.d = d;
  out.P = m1_eig.eigenvectors.leftCols(d);
  out.Q = m2_eig.eigenvectors.leftCols(d);

  if (options.w) {
    if (options.w->size() != Eigen::Index(d) * d) {
      fail(ErrorKind::ShapeError, "w must have length d^2 = " +
                                      std::to_string(std::size_t(d) * d));
    }
    out.w = *options.w;
  } else {
    Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
    out.w = Eigen::Map<const Eigen::VectorXd>(eye.data(), d * d);
    out.w.normalize();
  }

  // (Q (x) P) w == vec(P W Q^T) under column-major stacking.
  const Eigen::MatrixXd wmat =
      Eigen::Map<const Eigen::MatrixXd>(out.w.data(), d, d);
  const Eigen::MatrixXd proj = out.P * wmat * out.Q.transpose();  // p x q
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(proj.data(), p * q);

  const Eigen::VectorXd ybar = series.vecs().rowwise().mean();
  const auto sigma_check = [&](int k) -> Eigen::MatrixXd {
    if (delta2 == 0.0) {
      // Theta^T Sigma_tilde(k) collapses to a Y-versus-zeta cross
      // covariance with zeta_t = v^T vec(Y_t - Ybar).
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(p * q);
      for (Eigen::Index t = k; t < n; ++t) {
        const double zeta = v.dot(series.vecs().col(t - k) - ybar);
        acc += (series.vecs().col(t) - ybar) * zeta;
      }
      acc /= double(n - k);
      const Eigen::Map<const Eigen::MatrixXd> ck(acc.data(), p, q);
      return out.P.transpose() * ck * out.Q;
    }
    // Materialized route: Sigma_tilde(k) is (p^2 q) x q; Theta-hat is
    // I_p (x) v, so Theta^T picks v out of each row block.
    Eigen::MatrixXd big = Eigen::MatrixXd::Zero(p * p * q, q);
    for (Eigen::Index t = k; t < n; ++t) {
      const Eigen::VectorXd yv = series.vecs().col(t) - ybar;
      const Eigen::Map<const Eigen::MatrixXd> ymat(yv.data(), p, q);
      const Eigen::VectorXd zv = series.vecs().col(t - k) - ybar;
      for (Eigen::Index i = 0; i < p; ++i) {
        big.middleRows(i * p * q, p * q) += zv * ymat.row(i);
      }
    }
    big /= double(n - k);
    big = hard_threshold(big, delta2);
    Eigen::MatrixXd contracted(p, q);  // Theta^T T_delta{Sigma_tilde(k)}
    for (Eigen::Index i = 0; i < p; ++i) {
      contracted.row(i) = v.transpose() * big.middleRows(i * p * q, p * q);
    }
    return out.P.transpose() * contracted * out.Q;
  };

  out.s1 = sigma_check(1);
  out.s2 = sigma_check(2);
  return out;
}

CpFit cp_refined_core(const MatrixSeries& series, const CpOptions& options) {
  const detail::RefinedIntermediates core = compute_refined_intermediates(series, options);
  const int d = core.d;
  const Eigen::MatrixXd& P = core.P;
  const Eigen::MatrixXd& Q = core.Q;
  const Eigen::MatrixXd& s1 = core.s1;
  const Eigen::MatrixXd& s2 = core.s2;

  const Eigen::MatrixXd gram = s1.transpose() * s1;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) {
    fail(ErrorKind::RefinementSingular, "Sigma_check(1) is singular");
  }
  const Eigen::MatrixXd J = lu.solve(s1.transpose() * s2);

  const GeneralizedEigenResult jeig =
      generalized_eigen(J, Eigen::MatrixXd::Identity(d, d), d);

  Eigen::MatrixXd U(d, d);
  for (int l = 0; l < d; ++l) {
    U.col(l) = normalized_or_fail(s1 * jeig.basis.col(l), "refined left atom");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> ulu(U);
  if (!ulu.isInvertible()) {
    fail(ErrorKind::RefinementSingular, "U is singular");
  }
  const Eigen::MatrixXd u_dual = ulu.inverse();  // rows are u^l
  Eigen::MatrixXd V(d, d);
  for (int l = 0; l < d; ++l) {
    V.col(l) = normalized_or_fail(s1.transpose() * u_dual.row(l).transpose(),
                                  "refined right atom");
  }

  Eigen::MatrixXd A = P * U;
  Eigen::MatrixXd B = Q * V;
  for (int l = 0; l < d; ++l) {
    A.col(l) = normalized_or_fail(A.col(l), "loading column");
    B.col(l) = normalized_or_fail(B.col(l), "loading column");
  }
  sign_normalize_columns(A);
  sign_normalize_columns(B);

  CpFit fit;
  fit.method = CpMethod::refined;
  fit.rank = d;
  fit.A = std::move(A);
  fit.B = std::move(B);
  fit.factors = recover_factors(series, fit.A, fit.B);
  return fit;
}

// Both methods assume q <= p; otherwise estimate on the transposed series
// and swap the loadings back.
template <typename Core>
CpFit with_orientation(const MatrixSeries& series, const CpOptions& options,
                       Core core) {
  if (series.p() >= series.q()) return core(series, options);
  CpFit fit = core(series.transposed(), options);
  std::swap(fit.A, fit.B);
  return fit;
}

}  // namespace

CpFit cp_direct(const MatrixSeries& series, const CpOptions& options) {
  return with_orientation(series, options, cp_direct_core);
}

CpFit cp_refined(const MatrixSeries& series, const CpOptions& options) {
  return with_orientation(series, options, cp_refined_core);
}

CpDgp dgp_cp(Eigen::Index n, Eigen::Index p, Eigen::Index q, int d, int d1,
             int d2, Rng rng) {
  if (d < 1 || d1 < 1 || d2 < 1 || d1 > d || d2 > d || d >= std::min(p, q)) {
    fail(ErrorKind::InvalidRanks,
         "ranks must satisfy 1 <= d1, d2 <= d < min(p, q)");
  }
  if (n < 3) fail(ErrorKind::InvalidData, "need n >= 3");

  Rng seed_rng = rng.fork(1);
  Eigen::MatrixXd a_dagger(p, d), b_dagger(q, d);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (int j = 0; j < d; ++j) a_dagger(i, j) = seed_rng.uniform(-3.0, 3.0);
  }
  for (Eigen::Index i = 0; i < q; ++i) {
    for (int j = 0; j < d; ++j) b_dagger(i, j) = seed_rng.uniform(-3.0, 3.0);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd_a(a_dagger, Eigen::ComputeThinU);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd_b(b_dagger, Eigen::ComputeThinU);
  const Eigen::MatrixXd P = svd_a.matrixU().leftCols(d1);
  const Eigen::MatrixXd Q = svd_b.matrixU().leftCols(d2);

  const Eigen::MatrixXd u_star = P.transpose() * a_dagger;  // d1 x d
  const Eigen::MatrixXd v_star = Q.transpose() * b_dagger;  // d2 x d

  Eigen::MatrixXd U(d1, d), V(d2, d);
  Eigen::VectorXd scale(d);
  for (int j = 0; j < d; ++j) {
    U.col(j) = u_star.col(j) / u_star.col(j).norm();
    V.col(j) = v_star.col(j) / v_star.col(j).norm();
    scale(j) = u_star.col(j).norm() * v_star.col(j).norm();
  }

  Rng coef_rng = rng.fork(2);
  Eigen::MatrixXd factors(n, d);
  for (int j = 0; j < d; ++j) {
    const double magnitude = coef_rng.uniform(0.6, 0.95);
    const double sign = coef_rng.uniform() < 0.5 ? -1.0 : 1.0;
    ArmaSpec spec;
    spec.ar = Eigen::VectorXd::Constant(1, sign * magnitude);
    Rng path_rng = rng.fork(100 + j);
    factors.col(j) = scale(j) * sim_arma(spec, n, path_rng);
  }

  const Eigen::MatrixXd A = P * U;
  const Eigen::MatrixXd B = Q * V;

  Rng noise_rng = rng.fork(3);
  Eigen::MatrixXd vecs(p * q, n);
  for (Eigen::Index t = 0; t < n; ++t) {
    Eigen::MatrixXd yt = A * factors.row(t).asDiagonal() * B.transpose();
    for (Eigen::Index j = 0; j < q; ++j) {
      for (Eigen::Index i = 0; i < p; ++i) yt(i, j) += noise_rng.normal();
    }
    vecs.col(t) = Eigen::Map<const Eigen::VectorXd>(yt.data(), p * q);
  }

  CpDgp out;
  out.series = MatrixSeries(std::move(vecs), p, q);
  out.A = A;
  out.B = B;
  out.factors = std::move(factors);
  return out;
}

namespace detail {

RefinedIntermediates refined_intermediates(const MatrixSeries& series,
                                           const CpOptions& options) {
  if (series.p() < series.q()) {
    fail(ErrorKind::ShapeError, "refined intermediates assume q <= p");
  }
  return compute_refined_intermediates(series, options);
}

}  // namespace detail

std::vector<Eigen::MatrixXd> predict_cp(const CpFit& fit, int steps,
                                        int ar_max_order) {
  if (steps < 1) fail(ErrorKind::InvalidArgument, "steps must be >= 1");
  const Eigen::Index n = fit.factors.rows();
  if (n < 10) fail(ErrorKind::InvalidData, "need at least 10 factor observations");
  const int max_order = std::min<int>(ar_max_order, int(n) - 10);

  Eigen::MatrixXd xf(steps, fit.rank);
  for (int l = 0; l < fit.rank; ++l) {
    const ArModel model = fit_ar_aic(fit.factors.col(l), max_order);
    xf.col(l) = forecast_ar(model, fit.factors.col(l), steps);
  }

  std::vector<Eigen::MatrixXd> out;
  out.reserve(steps);
  for (int h = 0; h < steps; ++h) {
    out.push_back(fit.A * xf.row(h).asDiagonal() * fit.B.transpose());
  }
  return out;
}

}  // namespace hdts
