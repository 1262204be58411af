#include "hdts/coint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hdts/spectral.hpp"

namespace hdts {

Eigen::MatrixXd build_W_check(const Series& series, int lag_k) {
  if (lag_k < 0 || lag_k > series.n() - 2) {
    fail(ErrorKind::LagOutOfRange,
         "lag count must lie in [0, n-2], got " + std::to_string(lag_k));
  }
  const Eigen::Index p = series.p();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
  for (int k = 0; k <= lag_k; ++k) {
    const Eigen::MatrixXd sk = lag_autocovariance(series, k).matrix;
    w.noalias() += sk * sk.transpose();
  }
  return 0.5 * (w + w.transpose());
}

int acf_rank(const Series& transformed, int m, double c0) {
  const Eigen::Index n = transformed.n();
  if (m < 1 || m > n - 2) {
    fail(ErrorKind::LagOutOfRange, "m must lie in [1, n-2]");
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < transformed.p(); ++i) {
    const Eigen::VectorXd x = transformed.data().col(i);
    if (detail::is_constant_column(x)) {
      fail(ErrorKind::DegenerateColumn,
           "component " + std::to_string(i) + " (0-based) has zero variance");
    }
    const Eigen::VectorXd c = x.array() - x.mean();
    const double denom = c.squaredNorm();
    double s = 0.0;
    for (int k = 1; k <= m; ++k) {
      const double num = c.tail(n - k).dot(c.head(n - k));
      s += double(n) * num / (double(n - k) * denom);
    }
    if (s / double(m) < c0) ++rank;
  }
  return rank;
}

namespace {

// MacKinnon (2010) response-surface critical values, constant-only case.
double adf_critical_value(double alpha, Eigen::Index n) {
  struct Row {
    double level, c0, c1, c2, c3;
  };
  static constexpr Row kTable[] = {
      {0.01, -3.43035, -6.5393, -16.786, -79.433},
      {0.05, -2.86154, -2.8903, -4.234, -40.040},
      {0.10, -2.56677, -1.5384, -2.809, 0.0},
  };
  const Row* best = &kTable[0];
  for (const Row& row : kTable) {
    if (std::abs(row.level - alpha) < std::abs(best->level - alpha)) best = &row;
  }
  const double t = double(n);
  return best->c0 + best->c1 / t + best->c2 / (t * t) + best->c3 / (t * t * t);
}

struct AdfRegression {
  double t_stat = 0.0;
  double maic = 0.0;
};

// Delta x_t on [1, x_{t-1}, Delta x_{t-1..t-k}], rows t = t0..end. The
// information criterion is Ng-Perron's modified AIC, whose data-dependent
// penalty keeps enough lags when the differenced series carries a strong
// moving-average component; plain AIC underlags there and the t-statistic
// over-rejects.
AdfRegression adf_regression(const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                             int k, Eigen::Index t0) {
  const Eigen::Index n = x.size();
  const Eigen::Index rows = n - t0;
  Eigen::MatrixXd design(rows, 2 + k);
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::Index t = t0 + r;
    design(r, 0) = 1.0;
    design(r, 1) = x(t - 1);
    for (int j = 1; j <= k; ++j) design(r, 1 + j) = dx(t - j);  // dx(t) = x(t)-x(t-1)
    target(r) = dx(t);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < design.cols()) {
    fail(ErrorKind::SingularDesign, "collinear ADF regressors");
  }
  const Eigen::VectorXd coef = qr.solve(target);
  const Eigen::VectorXd resid = target - design * coef;
  const double dof = double(rows - design.cols());
  const double sigma2 = resid.squaredNorm() / dof;
  const Eigen::MatrixXd xtx_inv =
      (design.transpose() * design).ldlt().solve(
          Eigen::MatrixXd::Identity(design.cols(), design.cols()));
  const double se = std::sqrt(sigma2 * xtx_inv(1, 1));

  const double lag_mean = design.col(1).mean();
  const double lag_ss = (design.col(1).array() - lag_mean).square().sum();
  const double sigma2_ml = std::max(resid.squaredNorm() / double(rows), 1e-300);
  const double tau = coef(1) * coef(1) * lag_ss / sigma2_ml;

  AdfRegression out;
  out.t_stat = coef(1) / se;
  out.maic = std::log(sigma2_ml) + 2.0 * (tau + double(k)) / double(rows);
  return out;
}

}  // namespace

AdfResult adf_test(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha) {
  const Eigen::Index n = x.size();
  if (n < 20) fail(ErrorKind::InvalidData, "ADF needs n >= 20");
  if (detail::is_constant_column(x)) {
    fail(ErrorKind::DegenerateColumn, "constant series");
  }
  const int k_max = std::min<int>(
      int(std::floor(12.0 * std::pow(double(n) / 100.0, 0.25))), int(n) / 3);

  Eigen::VectorXd dx(n);
  dx(0) = 0.0;
  for (Eigen::Index t = 1; t < n; ++t) dx(t) = x(t) - x(t - 1);

  // Order selection on the common sample, then refit at the chosen order.
  int best_k = 0;
  double best_maic = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max; ++k) {
    const AdfRegression reg = adf_regression(x, dx, k, k_max + 1);
    if (reg.maic < best_maic) {
      best_maic = reg.maic;
      best_k = k;
    }
  }
  const AdfRegression final_reg = adf_regression(x, dx, best_k, best_k + 1);

  AdfResult out;
  out.statistic = final_reg.t_stat;
  out.critical_value = adf_critical_value(alpha, n);
  out.lag_order = best_k;
  out.reject_unit_root = out.statistic < out.critical_value;
  return out;
}

bool AdfStationarityTest::reject_stationarity(
    const Eigen::Ref<const Eigen::VectorXd>& x, double alpha) const {
  return !adf_test(x, alpha).reject_unit_root;
}

CointFit fit_coint(const Series& series, const CointOptions& options) {
  const Eigen::Index p = series.p();
  const Eigen::MatrixXd w = build_W_check(series, options.lag_k);
  const SpectralResult eig = sym_eigen(w);

  CointFit fit;
  fit.A = eig.eigenvectors;
  fit.method = options.type;

  const Series transformed(series.data() * fit.A);

  std::optional<int> acf_value;
  std::optional<int> ur_value;
  if (options.type == CointMethod::acf || options.type == CointMethod::both) {
    acf_value = acf_rank(transformed, options.m, options.c0);
  }
  if (options.type == CointMethod::urtest || options.type == CointMethod::both) {
    static const AdfStationarityTest kDefaultTest;
    const UnitRootTest* test =
        options.unit_root ? options.unit_root : &kDefaultTest;
    // Scan the smallest-eigenvalue components first; stop at the first one
    // whose stationarity null is rejected.
    int count = 0;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (test->reject_stationarity(transformed.data().col(p - 1 - i),
                                    options.alpha)) {
        break;
      }
      ++count;
    }
    ur_value = count;
  }

  switch (options.type) {
    case CointMethod::acf:
      fit.rank = *acf_value;
      break;
    case CointMethod::urtest:
      fit.rank = *ur_value;
      break;
    case CointMethod::both:
      fit.rank = *acf_value;  // headline rank; both values reported
      fit.per_method_rank = std::make_pair(*acf_value, *ur_value);
      break;
  }
  return fit;
}

}  // namespace hdts
