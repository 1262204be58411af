#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hdts/dgp.hpp"
#include "hdts/forecast.hpp"
#include "hdts/rng.hpp"
#include "oracles.hpp"

using hdts::ArmaSpec;
using hdts::ArModel;
using hdts::Error;
using hdts::Rng;
using hdts::VarModel;

TEST_CASE("AR fit recovers an AR(2) at long samples") {
  Rng rng(201);
  ArmaSpec spec;
  spec.ar = Eigen::Vector2d(0.5, 0.3);
  const Eigen::VectorXd x = hdts::sim_arma(spec, 5000, rng);
  const ArModel model = hdts::fit_ar_aic(x, 5);
  REQUIRE(model.order >= 2);
  CHECK(model.coefficients(0) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(model.coefficients(0) - 0.5) < 0.05);
  CHECK(std::abs(model.coefficients(1) - 0.3) < 0.05);
}

TEST_CASE("white noise mostly selects order zero") {
  Rng rng(203);
  int zeros = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng path = rng.fork(rep);
    Eigen::VectorXd x(500);
    for (int t = 0; t < 500; ++t) x(t) = path.normal();
    if (hdts::fit_ar_aic(x, 5).order == 0) ++zeros;
  }
  CHECK(zeros > 50);
}

TEST_CASE("AR fit preconditions and degenerate input") {
  Eigen::VectorXd tiny = Eigen::VectorXd::Zero(12);
  CHECK_THROWS_AS(hdts::fit_ar_aic(tiny, 5), Error);
  Eigen::VectorXd constant = Eigen::VectorXd::Constant(50, 2.0);
  CHECK_THROWS_AS(hdts::fit_ar_aic(constant, 5), Error);
}

TEST_CASE("AIC curve attains its minimum at the winner") {
  Rng rng(205);
  ArmaSpec spec;
  spec.ar = Eigen::VectorXd::Constant(1, 0.6);
  const Eigen::VectorXd x = hdts::sim_arma(spec, 800, rng);
  const ArModel model = hdts::fit_ar_aic(x, 5);
  REQUIRE(model.aic_curve.size() == 6);
  double min_aic = model.aic_curve[0];
  for (double a : model.aic_curve) min_aic = std::min(min_aic, a);
  CHECK(model.aic == min_aic);
  CHECK(model.aic == model.aic_curve[std::size_t(model.order)]);
}

TEST_CASE("Yule-Walker models are stationary") {
  Rng rng(207);
  for (int rep = 0; rep < 25; ++rep) {
    Rng path = rng.fork(rep);
    ArmaSpec spec;
    spec.ar = Eigen::VectorXd::Constant(1, path.uniform(-0.9, 0.9));
    const Eigen::VectorXd x = hdts::sim_arma(spec, 300, path);
    const ArModel model = hdts::fit_ar_aic(x, 5);
    if (model.order == 0) continue;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(model.order, model.order);
    companion.row(0) = model.coefficients.transpose();
    if (model.order > 1) {
      companion.block(1, 0, model.order - 1, model.order - 1).setIdentity();
    }
    CHECK(companion.eigenvalues().cwiseAbs().maxCoeff() < 1.0 + 1e-8);
  }
}

TEST_CASE("AR forecast recursion") {
  ArModel ar1;
  ar1.order = 1;
  ar1.coefficients = Eigen::VectorXd::Constant(1, 0.6);
  ar1.intercept = 0.0;
  Eigen::VectorXd history(1);
  history << 2.0;
  const Eigen::VectorXd f = hdts::forecast_ar(ar1, history, 2);
  CHECK(f(0) == doctest::Approx(1.2));
  CHECK(f(1) == doctest::Approx(0.72));

  ArModel mean_only;
  mean_only.order = 0;
  mean_only.coefficients = Eigen::VectorXd();
  mean_only.intercept = 3.5;
  const Eigen::VectorXd g = hdts::forecast_ar(mean_only, Eigen::VectorXd(), 4);
  CHECK((g.array() == 3.5).all());
}

TEST_CASE("AR forecasts stay bounded out to h = 100") {
  Rng rng(209);
  ArmaSpec spec;
  spec.ar = Eigen::VectorXd::Constant(1, 0.8);
  const Eigen::VectorXd x = hdts::sim_arma(spec, 400, rng);
  const ArModel model = hdts::fit_ar_aic(x, 5);
  const Eigen::VectorXd f = hdts::forecast_ar(model, x, 100);
  CHECK(f.allFinite());
  CHECK(f.cwiseAbs().maxCoeff() < 1e3);
}

TEST_CASE("forecast recursion identity: longer horizons extend shorter ones") {
  Rng rng(211);
  ArmaSpec spec;
  spec.ar = Eigen::Vector2d(0.4, 0.2);
  const Eigen::VectorXd x = hdts::sim_arma(spec, 300, rng);
  const ArModel model = hdts::fit_ar_aic(x, 5);
  const Eigen::VectorXd a = hdts::forecast_ar(model, x, 3);
  const Eigen::VectorXd b = hdts::forecast_ar(model, x, 7);
  CHECK((b.head(3) - a).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("exact VAR(1) is recovered to machine precision") {
  Eigen::MatrixXd coef(2, 2);
  coef << 0.5, 0.2, -0.3, 0.4;
  Eigen::MatrixXd x(200, 2);
  x.row(0) << 1.0, -2.0;
  for (int t = 1; t < 200; ++t) {
    x.row(t) = (coef * x.row(t - 1).transpose()).transpose();
  }
  const VarModel model = hdts::fit_var_aic(x, 3);
  REQUIRE(model.order == 1);
  CHECK((model.coefficients[0] - coef).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(model.intercept.cwiseAbs().maxCoeff() < 1e-8);

  // One-step forecast = M * last row.
  const Eigen::MatrixXd f = hdts::forecast_var(model, x, 1);
  const Eigen::VectorXd expected = coef * x.row(199).transpose();
  CHECK((f.row(0).transpose() - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("univariate VAR agrees with an AR least-squares path") {
  Rng rng(213);
  ArmaSpec spec;
  spec.ar = Eigen::VectorXd::Constant(1, 0.7);
  const Eigen::VectorXd x = hdts::sim_arma(spec, 400, rng);
  const VarModel var = hdts::fit_var_aic(x, 3);

  // Reference: direct least squares at the selected order.
  const int k = var.order;
  REQUIRE(k >= 1);
  const Eigen::Index rows = x.size() - k;
  Eigen::MatrixXd design(rows, 1 + k);
  Eigen::VectorXd target(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    design(r, 0) = 1.0;
    for (int j = 1; j <= k; ++j) design(r, j) = x(k + r - j);
    target(r) = x(k + r);
  }
  const Eigen::VectorXd beta =
      design.colPivHouseholderQr().solve(target);
  double expected = beta(0);
  for (int j = 1; j <= k; ++j) expected += beta(j) * x(x.size() - j);

  const Eigen::MatrixXd f = hdts::forecast_var(var, x, 1);
  CHECK(f(0, 0) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("white-noise VAR concentrates on low orders") {
  Rng rng(215);
  int low = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng path = rng.fork(rep);
    const Eigen::MatrixXd x = oracle::random_matrix(250, 2, path);
    if (hdts::fit_var_aic(x, 4).order <= 1) ++low;
  }
  CHECK(low >= 80);
}

TEST_CASE("VAR forecasts: h = 0 and iterated one-step identity") {
  Rng rng(217);
  Eigen::MatrixXd coef(2, 2);
  coef << 0.4, 0.1, -0.2, 0.3;
  const Eigen::MatrixXd x = hdts::sim_var1(coef, 300, rng);
  const VarModel model = hdts::fit_var_aic(x, 4);

  CHECK(hdts::forecast_var(model, x, 0).rows() == 0);

  const Eigen::MatrixXd direct = hdts::forecast_var(model, x, 3);
  Eigen::MatrixXd extended = x;
  for (int h = 0; h < 3; ++h) {
    const Eigen::MatrixXd one = hdts::forecast_var(model, extended, 1);
    extended.conservativeResize(extended.rows() + 1, Eigen::NoChange);
    extended.row(extended.rows() - 1) = one.row(0);
    CHECK((one.row(0) - direct.row(h)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("collinear VAR design raises SingularDesign") {
  Eigen::MatrixXd x(60, 2);
  Rng rng(219);
  for (int t = 0; t < 60; ++t) {
    const double v = rng.normal();
    x.row(t) << v, 2.0 * v;  // second column is an exact multiple
  }
  CHECK_THROWS_AS(hdts::fit_var_aic(x, 2), Error);
}
