#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hdts/error.hpp"

namespace hdts {

/// Univariate AR(k) model fitted by Yule-Walker with the order chosen by
/// AIC = n log(sigma2) + 2(order + 1) over orders 0..max. Order 0 is the
/// mean-only model. Yule-Walker fits are stationary by construction.
struct ArModel {
  int order = 0;
  Eigen::VectorXd coefficients;  // phi_1..phi_k
  double intercept = 0.0;        // so that forecasts revert to the sample mean
  double sigma2 = 0.0;           // innovation variance
  double aic = 0.0;
  std::vector<double> aic_curve;  // AIC at orders 0..max
};

/// g-variate VAR(k) fitted by per-order least squares with intercept;
/// order chosen by AIC = n log det(Sigma_eps) + 2(g^2 k + g).
struct VarModel {
  int order = 0;
  std::vector<Eigen::MatrixXd> coefficients;  // k matrices of size g x g
  Eigen::VectorXd intercept;
  double aic = 0.0;
  std::vector<double> aic_curve;
};

ArModel fit_ar_aic(const Eigen::Ref<const Eigen::VectorXd>& x, int max_order = 5);

/// Plug-in forecast recursion. `history` must supply at least `order`
/// trailing values of the series (most recent last).
Eigen::VectorXd forecast_ar(const ArModel& model,
                            const Eigen::Ref<const Eigen::VectorXd>& history,
                            int steps);

VarModel fit_var_aic(const Eigen::Ref<const Eigen::MatrixXd>& x, int max_order = 6);

/// h x g forecast matrix; `history` rows are observations, most recent last.
Eigen::MatrixXd forecast_var(const VarModel& model,
                             const Eigen::Ref<const Eigen::MatrixXd>& history,
                             int steps);

}  // namespace hdts
