#include "hdts/factor.hpp"

#include <algorithm>
#include <cmath>

#include "hdts/forecast.hpp"
#include "hdts/spectral.hpp"

namespace hdts {

namespace {

double resolve_delta(const Series& series, const FactorOptions& options) {
  if (!options.thresh) return 0.0;
  if (options.delta) {
    if (*options.delta < 0.0) {
      fail(ErrorKind::InvalidThreshold, "delta must be nonnegative");
    }
    return *options.delta;
  }
  return 2.0 * std::sqrt(std::log(double(series.p())) / double(series.n()));
}

struct OneStepFit {
  int r = 0;
  Eigen::MatrixXd loading;
};

OneStepFit one_step(const Series& series, int lag_k, double delta) {
  const Eigen::MatrixXd w = build_W(series, lag_k, delta);
  const SpectralResult eig = sym_eigen(w);
  OneStepFit out;
  out.r = ratio_order(eig.eigenvalues.cwiseMax(0.0), 0.75);
  out.loading = eig.eigenvectors.leftCols(out.r);
  return out;
}

}  // namespace

Eigen::MatrixXd build_W(const Series& series, int lag_k, double delta) {
  if (lag_k < 1 || lag_k > series.n() - 2) {
    fail(ErrorKind::LagOutOfRange,
         "lag count must lie in [1, n-2], got " + std::to_string(lag_k));
  }
  const Eigen::Index p = series.p();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
  for (int k = 1; k <= lag_k; ++k) {
    const Eigen::MatrixXd sk =
        hard_threshold(lag_autocovariance(series, k).matrix, delta);
    w.noalias() += sk * sk.transpose();
  }
  return 0.5 * (w + w.transpose());
}

FactorFit fit_factors(const Series& series, const FactorOptions& options) {
  if (series.p() < 2) {
    fail(ErrorKind::DimensionTooSmall, "factor model needs p >= 2");
  }
  const double delta = resolve_delta(series, options);

  FactorFit fit;
  fit.lag_k = options.lag_k;
  fit.two_step = options.two_step;

  const OneStepFit step1 = one_step(series, options.lag_k, delta);
  if (!options.two_step) {
    fit.factor_num = step1.r;
    fit.loading = step1.loading;
  } else {
    // Residualize against the step-1 loading space and rerun the same
    // estimator on y*_t = y_t - A1 A1^T y_t (same K and delta).
    const Eigen::MatrixXd residual =
        series.data() - (series.data() * step1.loading) * step1.loading.transpose();
    const OneStepFit step2 = one_step(Series(residual), options.lag_k, delta);
    fit.factor_num = step1.r + step2.r;
    fit.loading.resize(series.p(), fit.factor_num);
    fit.loading << step1.loading, step2.loading;
    fit.step_split = std::make_pair(step1.r, step2.r);
  }
  fit.factors = series.data() * fit.loading;
  return fit;
}

RegFactorFit fit_factors_with_regressors(const Series& series,
                                         const Series& regressors,
                                         const std::optional<Eigen::MatrixXd>& D,
                                         const FactorOptions& options) {
  const Eigen::Index n = series.n();
  const Eigen::Index m = regressors.p();
  if (regressors.n() != n) {
    fail(ErrorKind::ShapeError, "regressor panel length differs from series");
  }
  if (m > n) fail(ErrorKind::SingularDesign, "more regressors than observations");

  RegFactorFit out;
  if (D) {
    if (D->rows() != series.p() || D->cols() != m) {
      fail(ErrorKind::ShapeError, "supplied D has the wrong shape");
    }
    out.reg_coef = *D;
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(regressors.data());
    if (qr.rank() < m) {
      fail(ErrorKind::SingularDesign, "regressor matrix is rank deficient");
    }
    out.reg_coef = qr.solve(series.data()).transpose();  // p x m
  }

  const Eigen::MatrixXd eta =
      series.data() - regressors.data() * out.reg_coef.transpose();
  out.fit = fit_factors(Series(eta), options);
  return out;
}

Eigen::MatrixXd predict_factors(const FactorFit& fit, int steps,
                                int ar_max_order) {
  const Eigen::Index n = fit.factors.rows();
  if (n < 10) fail(ErrorKind::InvalidData, "need at least 10 factor observations");
  if (steps < 1) fail(ErrorKind::InvalidArgument, "steps must be >= 1");

  const int max_order = std::min<int>(ar_max_order, int(n) - 10);
  Eigen::MatrixXd forecasts(steps, fit.factor_num);
  for (int j = 0; j < fit.factor_num; ++j) {
    const ArModel model = fit_ar_aic(fit.factors.col(j), max_order);
    forecasts.col(j) = forecast_ar(model, fit.factors.col(j), steps);
  }
  return forecasts * fit.loading.transpose();
}

}  // namespace hdts
