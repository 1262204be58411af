#include "hdts/dgp.hpp"

#include <cmath>

namespace hdts {

namespace {

constexpr Eigen::Index kBurnIn = 200;

double companion_spectral_radius(const Eigen::Ref<const Eigen::VectorXd>& ar) {
  const Eigen::Index p = ar.size();
  if (p == 0) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  companion.row(0) = ar.transpose();
  if (p > 1) companion.block(1, 0, p - 1, p - 1).setIdentity();
  return companion.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::VectorXd sim_arma(const ArmaSpec& spec, Eigen::Index n, Rng& rng) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "path length must be positive");
  if (companion_spectral_radius(spec.ar) >= 1.0 - 1e-10) {
    fail(ErrorKind::InvalidCoefficients, "AR polynomial is not stationary");
  }
  const Eigen::Index p = spec.ar.size();
  const Eigen::Index q = spec.ma.size();
  const Eigen::Index total = n + kBurnIn;

  Eigen::VectorXd innov(total);
  for (Eigen::Index t = 0; t < total; ++t) innov(t) = spec.sigma * rng.normal();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(total);
  for (Eigen::Index t = 0; t < total; ++t) {
    double v = innov(t);
    for (Eigen::Index j = 0; j < p; ++j) {
      if (t - 1 - j >= 0) v += spec.ar(j) * x(t - 1 - j);
    }
    for (Eigen::Index j = 0; j < q; ++j) {
      if (t - 1 - j >= 0) v += spec.ma(j) * innov(t - 1 - j);
    }
    x(t) = v;
  }
  return x.tail(n);
}

Eigen::MatrixXd sim_var1(const Eigen::Ref<const Eigen::MatrixXd>& coefficient,
                         Eigen::Index n, Rng& rng) {
  const Eigen::Index g = coefficient.rows();
  if (coefficient.cols() != g) fail(ErrorKind::ShapeError, "coefficient must be square");
  if (coefficient.eigenvalues().cwiseAbs().maxCoeff() >= 1.0 - 1e-10) {
    fail(ErrorKind::InvalidCoefficients, "VAR(1) matrix is explosive");
  }
  Eigen::MatrixXd x(n, g);
  Eigen::VectorXd state = Eigen::VectorXd::Zero(g);
  for (Eigen::Index t = 0; t < n + kBurnIn; ++t) {
    state = coefficient * state + rng.normal_vector(g);
    if (t >= kBurnIn) x.row(t - kBurnIn) = state.transpose();
  }
  return x;
}

Eigen::VectorXd sim_integrated(int order, const ArmaSpec& inner, Eigen::Index n,
                               Rng& rng) {
  if (order < 0 || order > 2) {
    fail(ErrorKind::InvalidArgument, "integration order must be 0, 1 or 2");
  }
  Eigen::VectorXd x = sim_arma(inner, n, rng);
  for (int d = 0; d < order; ++d) {
    for (Eigen::Index t = 1; t < n; ++t) x(t) += x(t - 1);
  }
  return x;
}

namespace {

ExampleData example_factor(const ExampleConfig& config, Rng& rng) {
  const Eigen::Index n = config.n.value_or(400);
  const Eigen::Index p = config.p.value_or(200);
  const int r = 3;
  const bool with_regressors = config.id == 2;
  const double loading_range = with_regressors ? 2.0 : 1.0;

  Eigen::Matrix3d var_coef = Eigen::Matrix3d::Zero();
  var_coef.diagonal() << 0.6, -0.5, 0.3;
  Rng factor_rng = rng.fork(1);
  const Eigen::MatrixXd x = sim_var1(var_coef, n, factor_rng);

  Rng loading_rng = rng.fork(2);
  Eigen::MatrixXd loading(p, r);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (int j = 0; j < r; ++j) {
      loading(i, j) = loading_rng.uniform(-loading_range, loading_range);
    }
  }
  if (config.weak_third_factor) {
    loading.col(2) /= std::pow(double(p), 0.25);
  }

  Rng noise_rng = rng.fork(3);
  Eigen::MatrixXd y(n, p);
  for (Eigen::Index t = 0; t < n; ++t) {
    y.row(t) = (loading * x.row(t).transpose()).transpose();
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < p; ++j) y(t, j) += noise_rng.normal();
  }

  ExampleData out;
  out.true_factor_num = r;
  out.true_loading = loading;
  if (with_regressors) {
    const int m = 2;
    Eigen::Matrix2d z_coef;
    z_coef << 0.625, 0.125, 0.125, 0.625;
    Rng reg_rng = rng.fork(4);
    const Eigen::MatrixXd z = sim_var1(z_coef, n, reg_rng);
    Rng d_rng = rng.fork(5);
    Eigen::MatrixXd d(p, m);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (int j = 0; j < m; ++j) d(i, j) = d_rng.uniform(-2.0, 2.0);
    }
    y += z * d.transpose();
    out.regressors = Series(z);
    out.true_reg_coef = d;
  }
  out.observations = Series(std::move(y));
  return out;
}

ExampleData example_segmentation(const ExampleConfig& config, Rng& rng) {
  const Eigen::Index n = config.n.value_or(1500);
  const Eigen::Index p = 6;

  ArmaSpec block1;
  block1.ar = Eigen::Vector2d(0.5, 0.3);
  block1.ma = Eigen::VectorXd(4);
  block1.ma << -0.9, 0.3, 1.2, 1.3;
  ArmaSpec block2;
  block2.ar = Eigen::Vector2d(0.8, -0.5);
  block2.ma = Eigen::Vector3d(1.0, 0.8, 1.8);
  ArmaSpec block3;
  block3.ar = Eigen::Vector2d(-0.7, -0.5);
  block3.ma = Eigen::Vector2d(-1.0, -0.8);

  Rng r1 = rng.fork(1), r2 = rng.fork(2), r3 = rng.fork(3);
  const Eigen::VectorXd eta1 = sim_arma(block1, n + 2, r1);
  const Eigen::VectorXd eta2 = sim_arma(block2, n + 1, r2);
  const Eigen::VectorXd eta3 = sim_arma(block3, n, r3);

  // Components 1..3 are time-shifted copies of the first path, 4..5 of the
  // second, producing three mutually independent subseries.
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < 3; ++j) x.col(j) = eta1.segment(j, n);
  for (int j = 0; j < 2; ++j) x.col(3 + j) = eta2.segment(j, n);
  x.col(5) = eta3;

  Rng mix_rng = rng.fork(4);
  Eigen::MatrixXd mixing(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) mixing(i, j) = mix_rng.uniform(-3.0, 3.0);
  }

  ExampleData out;
  out.observations = Series(x * mixing.transpose());
  out.true_mixing = mixing;
  out.true_groups = std::vector<std::vector<int>>{{0, 1, 2}, {3, 4}, {5}};
  return out;
}

ExampleData example_cointegration(const ExampleConfig& config, Rng& rng) {
  const Eigen::Index n = config.n.value_or(1500);
  const Eigen::Index p = 8;

  Eigen::MatrixXd x(n, p);
  ArmaSpec white;
  Rng rw = rng.fork(1);
  x.col(0) = sim_integrated(1, white, n, rw);
  Rng rn = rng.fork(2);
  for (Eigen::Index t = 0; t < n; ++t) {
    x(t, 1) = rn.normal();
    x(t, 2) = rn.normal();
  }
  ArmaSpec ar1;
  ar1.ar = Eigen::VectorXd::Constant(1, 0.5);
  Rng ra = rng.fork(3);
  x.col(3) = sim_arma(ar1, n, ra);
  ArmaSpec arima;
  arima.ar = Eigen::VectorXd::Constant(1, 0.6);
  arima.ma = Eigen::VectorXd::Constant(1, 0.8);
  for (int j = 4; j < 8; ++j) {
    Rng ri = rng.fork(10 + j);
    x.col(j) = sim_integrated(1, arima, n, ri);
  }

  Rng mix_rng = rng.fork(4);
  Eigen::MatrixXd mixing(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) mixing(i, j) = mix_rng.uniform(-3.0, 3.0);
  }
  mixing.topLeftCorner(3, 3) << 1.0, 1.0, 0.0, 0.5, 0.0, 1.0, 0.0, 1.0, 0.0;

  ExampleData out;
  out.observations = Series(x * mixing.transpose());
  out.true_mixing = mixing;
  out.true_coint_rank = 3;  // x2, x3 and the AR(1) component are stationary
  return out;
}

ExampleData example_white_noise(const ExampleConfig& config, Rng& rng) {
  const Eigen::Index n = config.n.value_or(200);
  const Eigen::Index p = config.p.value_or(10);
  Rng noise = rng.fork(1);
  Eigen::MatrixXd y(n, p);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < p; ++j) y(t, j) = noise.normal();
  }
  ExampleData out;
  out.observations = Series(std::move(y));
  return out;
}

}  // namespace

ExampleData make_example(const ExampleConfig& config, Rng rng) {
  switch (config.id) {
    case 1:
    case 2:
      return example_factor(config, rng);
    case 3:
      return example_segmentation(config, rng);
    case 5:
      return example_cointegration(config, rng);
    case 6:
      return example_white_noise(config, rng);
    default:
      fail(ErrorKind::InvalidArgument,
           "unknown example id " + std::to_string(config.id) +
               " (the matrix-series design is generated by the CP module)");
  }
}

}  // namespace hdts
