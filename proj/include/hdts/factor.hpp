#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "hdts/series.hpp"

namespace hdts {

/// Fitted factor model: r_hat, the orthonormal loading matrix and the factor
/// paths x_hat_t = A_hat^T y_t (reported on the raw data).
struct FactorFit {
  int factor_num = 0;
  Eigen::MatrixXd loading;  // p x r_hat, orthonormal columns
  Eigen::MatrixXd factors;  // n x r_hat
  int lag_k = 0;
  bool two_step = false;
  std::optional<std::pair<int, int>> step_split;  // (r1_hat, r2_hat)
};

struct FactorOptions {
  int lag_k = 5;
  bool thresh = false;
  /// Threshold level; when unset and thresh is on, defaults to
  /// 2 sqrt(log(p) / n).
  std::optional<double> delta;
  bool two_step = false;
};

/// W_hat = sum_{k=1}^{K} T_delta(Sigma_hat(k)) T_delta(Sigma_hat(k))^T,
/// symmetric PSD by construction.
Eigen::MatrixXd build_W(const Series& series, int lag_k, double delta);

FactorFit fit_factors(const Series& series, const FactorOptions& options = {});

/// Factor model with observed regressors: y_t = D z_t + A x_t + eps_t.
/// When D is not supplied it is estimated by least squares of y on z; the
/// factor model is then fitted to the regression residuals and the factors
/// are reported as A_hat^T (y_t - D_hat z_t).
struct RegFactorFit {
  FactorFit fit;
  Eigen::MatrixXd reg_coef;  // p x m
};

RegFactorFit fit_factors_with_regressors(
    const Series& series, const Series& regressors,
    const std::optional<Eigen::MatrixXd>& D = std::nullopt,
    const FactorOptions& options = {});

/// h x p forecast: each factor path is forecast by an AR model with AIC
/// order selection, then mapped back through the loading matrix.
Eigen::MatrixXd predict_factors(const FactorFit& fit, int steps,
                                int ar_max_order = 5);

}  // namespace hdts
