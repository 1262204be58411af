#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hdts/error.hpp"

namespace hdts {

/// An n x p time-major panel: row t holds the observation y_t.
/// Construction validates shape (n >= 2, p >= 1) and finiteness; missing
/// values are rejected, never imputed.
class Series {
 public:
  Series() = default;
  explicit Series(Eigen::MatrixXd data, std::vector<std::string> names = {});

  const Eigen::MatrixXd& data() const noexcept { return data_; }
  Eigen::Index n() const noexcept { return data_.rows(); }
  Eigen::Index p() const noexcept { return data_.cols(); }

  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  Eigen::MatrixXd data_;
  std::vector<std::string> names_;  // optional column labels, empty or size p
};

/// Lag-k autocovariance matrix Sigma_hat(k) of a panel, together with the
/// lag it was computed at.
struct LagCovariance {
  int lag = 0;
  Eigen::MatrixXd matrix;
};

/// Sigma_hat(k) = (n-k)^{-1} sum_{t=1}^{n-k} (y_{t+k} - ybar)(y_t - ybar)^T
/// with ybar the full-sample mean (also used for k > 0). k = 0 gives the
/// sample covariance with divisor n.
LagCovariance lag_autocovariance(const Series& series, int k);

/// Lag-k cross-correlation matrix
/// [diag Sigma_hat(0)]^{-1/2} Sigma_hat(k) [diag Sigma_hat(0)]^{-1/2}.
/// Entry (i,j) is rho_hat_{i,j}(k); the k = 0 diagonal is exactly one.
Eigen::MatrixXd lag_autocorrelation(const Series& series, int k);

/// Entrywise hard threshold: entries with |w_ij| < delta are zeroed,
/// all others pass through unchanged. delta = 0 is the identity.
Eigen::MatrixXd hard_threshold(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                               double delta);

namespace detail {

/// Columns with max == min carry no variance information; detected
/// structurally so that constant columns are caught regardless of
/// floating-point cancellation in the variance.
bool is_constant_column(const Eigen::Ref<const Eigen::VectorXd>& column);

/// Centered panel (rows minus the full-sample column means).
Eigen::MatrixXd centered(const Series& series);

}  // namespace detail

}  // namespace hdts
