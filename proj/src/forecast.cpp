#include "hdts/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdts {

namespace {

constexpr double kLogFloor = 1e-300;

// Biased (divisor n) autocovariances of the demeaned series, lags 0..max.
Eigen::VectorXd autocovariances(const Eigen::Ref<const Eigen::VectorXd>& x,
                                int max_lag) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd c = x.array() - x.mean();
  Eigen::VectorXd gamma(max_lag + 1);
  for (int k = 0; k <= max_lag; ++k) {
    gamma(k) = c.tail(n - k).dot(c.head(n - k)) / double(n);
  }
  return gamma;
}

}  // namespace

ArModel fit_ar_aic(const Eigen::Ref<const Eigen::VectorXd>& x, int max_order) {
  const Eigen::Index n = x.size();
  if (max_order < 0) fail(ErrorKind::InvalidArgument, "max_order must be >= 0");
  if (n < max_order + 10) {
    fail(ErrorKind::InvalidData,
         "AR fit needs n >= max_order + 10, got n = " + std::to_string(n));
  }
  if (x.maxCoeff() == x.minCoeff()) {
    fail(ErrorKind::DegenerateColumn, "series is constant");
  }

  const double mean = x.mean();
  const Eigen::VectorXd gamma = autocovariances(x, max_order);
  if (gamma(0) <= 0.0) fail(ErrorKind::DegenerateColumn, "series has zero variance");

  // Levinson-Durbin recursion; sigma2 and coefficients at every order.
  ArModel best;
  best.aic = std::numeric_limits<double>::infinity();
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(max_order);
  double sigma2 = gamma(0);
  for (int k = 0; k <= max_order; ++k) {
    if (k > 0) {
      double acc = gamma(k);
      for (int j = 1; j < k; ++j) acc -= phi(j - 1) * gamma(k - j);
      const double reflect = acc / sigma2;
      Eigen::VectorXd next = phi;
      next(k - 1) = reflect;
      for (int j = 1; j < k; ++j) {
        next(j - 1) = phi(j - 1) - reflect * phi(k - 1 - j);
      }
      phi = next;
      sigma2 *= (1.0 - reflect * reflect);
      sigma2 = std::max(sigma2, 0.0);
    }
    const double aic =
        double(n) * std::log(std::max(sigma2, kLogFloor)) + 2.0 * (k + 1);
    best.aic_curve.push_back(aic);
    if (aic < best.aic) {
      best.aic = aic;
      best.order = k;
      best.coefficients = phi.head(k);
      best.sigma2 = sigma2;
    }
  }
  best.intercept = mean * (1.0 - best.coefficients.sum());
  return best;
}

Eigen::VectorXd forecast_ar(const ArModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& history,
                            int steps) {
  if (steps < 0) fail(ErrorKind::InvalidArgument, "steps must be >= 0");
  if (history.size() < model.order) {
    fail(ErrorKind::InvalidData, "history shorter than the AR order");
  }
  const int k = model.order;
  Eigen::VectorXd state(k);
  for (int j = 0; j < k; ++j) state(j) = history(history.size() - k + j);

  Eigen::VectorXd out(steps);
  for (int h = 0; h < steps; ++h) {
    double v = model.intercept;
    for (int j = 1; j <= k; ++j) v += model.coefficients(j - 1) * state(k - j);
    out(h) = v;
    if (k > 0) {
      for (int j = 0; j + 1 < k; ++j) state(j) = state(j + 1);
      state(k - 1) = v;
    }
  }
  return out;
}

VarModel fit_var_aic(const Eigen::Ref<const Eigen::MatrixXd>& x, int max_order) {
  const Eigen::Index n = x.rows();
  const Eigen::Index g = x.cols();
  if (max_order < 0) fail(ErrorKind::InvalidArgument, "max_order must be >= 0");
  if (n < g * max_order + 10) {
    fail(ErrorKind::InvalidData,
         "VAR fit needs n >= g * max_order + 10, got n = " + std::to_string(n));
  }

  // Candidate orders are compared on the common sample that order
  // max_order leaves usable; the winner is refit on its full sample.
  // Candidates whose lag design is rank deficient drop out of the race;
  // if none of the orders >= 1 is estimable the target panel itself is
  // collinear.
  const auto ls_fit = [&](int k, Eigen::Index t0, Eigen::MatrixXd* coef,
                          double* logdet) -> bool {
    const Eigen::Index rows = n - t0;
    Eigen::MatrixXd design(rows, 1 + k * g);
    design.col(0).setOnes();
    for (int lag = 1; lag <= k; ++lag) {
      design.middleCols(1 + (lag - 1) * g, g) =
          x.middleRows(t0 - lag, rows);
    }
    const Eigen::MatrixXd target = x.bottomRows(rows);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < design.cols()) return false;
    *coef = qr.solve(target);  // (1 + k g) x g
    const Eigen::MatrixXd resid = target - design * (*coef);
    const Eigen::MatrixXd sigma = resid.transpose() * resid / double(rows);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma);
    double ld = 0.0;
    for (Eigen::Index i = 0; i < g; ++i) {
      ld += std::log(std::max(ldlt.vectorD()(i), kLogFloor));
    }
    *logdet = ld;
    return true;
  };

  int best_order = -1;
  double best_aic = std::numeric_limits<double>::infinity();
  std::vector<double> curve;
  bool any_lagged = false;
  for (int k = 0; k <= max_order; ++k) {
    Eigen::MatrixXd coef;
    double logdet;
    if (!ls_fit(k, max_order, &coef, &logdet)) {
      curve.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    if (k >= 1) any_lagged = true;
    const double aic = double(n) * logdet + 2.0 * (double(g) * g * k + g);
    curve.push_back(aic);
    if (aic < best_aic) {
      best_aic = aic;
      best_order = k;
    }
  }
  if (max_order >= 1 && !any_lagged) {
    fail(ErrorKind::SingularDesign, "target panel has collinear columns");
  }
  if (best_order < 0) {
    fail(ErrorKind::SingularDesign, "no estimable VAR order");
  }

  Eigen::MatrixXd coef;
  double logdet;
  if (!ls_fit(best_order, best_order, &coef, &logdet)) {
    fail(ErrorKind::SingularDesign,
         "collinear regressors in VAR order " + std::to_string(best_order));
  }

  VarModel model;
  model.order = best_order;
  model.aic = best_aic;
  model.aic_curve = std::move(curve);
  model.intercept = coef.row(0).transpose();
  for (int lag = 1; lag <= best_order; ++lag) {
    // design block held y_{t-lag}; its coefficient transposes to the usual
    // left-multiplying lag matrix
    model.coefficients.push_back(
        coef.middleRows(1 + (lag - 1) * g, g).transpose());
  }
  return model;
}

Eigen::MatrixXd forecast_var(const VarModel& model,
                             const Eigen::Ref<const Eigen::MatrixXd>& history,
                             int steps) {
  if (steps < 0) fail(ErrorKind::InvalidArgument, "steps must be >= 0");
  const int k = model.order;
  const Eigen::Index g = model.intercept.size();
  if (history.cols() != g) fail(ErrorKind::ShapeError, "history dimension mismatch");
  if (history.rows() < k) fail(ErrorKind::InvalidData, "history shorter than order");

  Eigen::MatrixXd state(k, g);
  for (int j = 0; j < k; ++j) state.row(j) = history.row(history.rows() - k + j);

  Eigen::MatrixXd out(steps, g);
  for (int h = 0; h < steps; ++h) {
    Eigen::VectorXd v = model.intercept;
    for (int lag = 1; lag <= k; ++lag) {
      v += model.coefficients[lag - 1] * state.row(k - lag).transpose();
    }
    out.row(h) = v.transpose();
    if (k > 0) {
      for (int j = 0; j + 1 < k; ++j) state.row(j) = state.row(j + 1);
      state.row(k - 1) = v.transpose();
    }
  }
  return out;
}

}  // namespace hdts
