#include "hdts/series.hpp"

#include <cmath>

namespace hdts {

Series::Series(Eigen::MatrixXd data, std::vector<std::string> names)
    : data_(std::move(data)), names_(std::move(names)) {
  if (data_.rows() < 2 || data_.cols() < 1) {
    fail(ErrorKind::InvalidData,
         "series requires n >= 2 rows and p >= 1 columns, got " +
             std::to_string(data_.rows()) + "x" + std::to_string(data_.cols()));
  }
  if (!data_.allFinite()) {
    for (Eigen::Index t = 0; t < data_.rows(); ++t) {
      for (Eigen::Index j = 0; j < data_.cols(); ++j) {
        if (!std::isfinite(data_(t, j))) {
          fail(ErrorKind::InvalidData,
               "non-finite value at row " + std::to_string(t) + ", column " +
                   std::to_string(j) + " (0-based)");
        }
      }
    }
  }
  if (!names_.empty() && names_.size() != static_cast<std::size_t>(data_.cols())) {
    fail(ErrorKind::InvalidData, "column name count does not match dimension");
  }
}

namespace detail {

bool is_constant_column(const Eigen::Ref<const Eigen::VectorXd>& column) {
  return column.maxCoeff() == column.minCoeff();
}

Eigen::MatrixXd centered(const Series& series) {
  return series.data().rowwise() - series.data().colwise().mean();
}

}  // namespace detail

LagCovariance lag_autocovariance(const Series& series, int k) {
  const Eigen::Index n = series.n();
  if (k < 0 || k > n - 2) {
    fail(ErrorKind::LagOutOfRange,
         "lag " + std::to_string(k) + " out of range [0, " +
             std::to_string(n - 2) + "]");
  }
  const Eigen::MatrixXd yc = detail::centered(series);
  const Eigen::Index m = n - k;
  LagCovariance out;
  out.lag = k;
  out.matrix = yc.bottomRows(m).transpose() * yc.topRows(m) / double(m);
  return out;
}

Eigen::MatrixXd lag_autocorrelation(const Series& series, int k) {
  const Eigen::MatrixXd s0 = lag_autocovariance(series, 0).matrix;
  Eigen::VectorXd inv_sd(series.p());
  for (Eigen::Index j = 0; j < series.p(); ++j) {
    if (detail::is_constant_column(series.data().col(j)) || s0(j, j) <= 0.0) {
      fail(ErrorKind::DegenerateColumn,
           "column " + std::to_string(j) + " (0-based) has zero variance");
    }
    inv_sd(j) = 1.0 / std::sqrt(s0(j, j));
  }
  Eigen::MatrixXd rho =
      inv_sd.asDiagonal() * lag_autocovariance(series, k).matrix * inv_sd.asDiagonal();
  if (k == 0) rho.diagonal().setOnes();
  return rho;
}

Eigen::MatrixXd hard_threshold(const Eigen::Ref<const Eigen::MatrixXd>& matrix,
                               double delta) {
  if (delta < 0.0 || !std::isfinite(delta)) {
    fail(ErrorKind::InvalidThreshold,
         "threshold level must be nonnegative, got " + std::to_string(delta));
  }
  if (delta == 0.0) return matrix;
  return (matrix.cwiseAbs().array() >= delta).select(matrix, 0.0);
}

}  // namespace hdts
