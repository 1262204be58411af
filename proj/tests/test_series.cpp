#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hdts/rng.hpp"
#include "hdts/series.hpp"
#include "oracles.hpp"

using hdts::Error;
using hdts::ErrorKind;
using hdts::Rng;
using hdts::Series;

TEST_CASE("series validation") {
  CHECK_THROWS_AS(Series(Eigen::MatrixXd::Zero(1, 3)), Error);
  CHECK_THROWS_AS(Series(Eigen::MatrixXd::Zero(3, 0)), Error);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(4, 2);
  bad(2, 1) = std::nan("");
  try {
    Series s(bad);
    FAIL("expected InvalidData");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidData);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("lag autocovariance of a constant series is zero") {
  Eigen::MatrixXd y(6, 3);
  for (int t = 0; t < 6; ++t) y.row(t) << 1.5, -2.0, 0.25;
  const Series s(y);
  for (int k = 0; k <= 3; ++k) {
    CHECK(hdts::lag_autocovariance(s, k).matrix.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("lag 0 equals the divisor-n sample covariance") {
  Rng rng(11);
  const Eigen::MatrixXd y = oracle::random_matrix(17, 3, rng);
  const Eigen::MatrixXd got = hdts::lag_autocovariance(Series(y), 0).matrix;
  const Eigen::MatrixXd centered = y.rowwise() - y.colwise().mean();
  const Eigen::MatrixXd expected = centered.transpose() * centered / 17.0;
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((got - got.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lag autocovariance matches the quadruple-loop oracle") {
  Rng rng(7);
  const Eigen::MatrixXd y = oracle::random_matrix(50, 4, rng);
  const Eigen::MatrixXd got = hdts::lag_autocovariance(Series(y), 2).matrix;
  CHECK((got - oracle::lag_cov(y, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("transpose convention against the oracle on small random panels") {
  Rng rng(21);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 5 + int(rng.uniform() * 25);
    const int p = 1 + int(rng.uniform() * 4);
    const int k = int(rng.uniform() * std::min(4, n - 2));
    const Eigen::MatrixXd y = oracle::random_matrix(n, p, rng);
    const Eigen::MatrixXd sk = hdts::lag_autocovariance(Series(y), k).matrix;
    // Sigma(k)^T equals the reversed-role sum E[(y_t - m)(y_{t+k} - m)^T].
    const Eigen::MatrixXd reversed = oracle::lag_cov(y, k).transpose();
    CHECK((sk.transpose() - reversed).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("lag out of range") {
  Rng rng(3);
  const Series s(oracle::random_matrix(10, 2, rng));
  CHECK_THROWS_AS(hdts::lag_autocovariance(s, -1), Error);
  CHECK_THROWS_AS(hdts::lag_autocovariance(s, 9), Error);
  CHECK_NOTHROW(hdts::lag_autocovariance(s, 8));
}

TEST_CASE("lag autocorrelation diagonal at k = 0 and bounds") {
  Rng rng(13);
  const Eigen::MatrixXd y = oracle::random_matrix(40, 5, rng);
  const Eigen::MatrixXd rho = hdts::lag_autocorrelation(Series(y), 0);
  for (int j = 0; j < 5; ++j) CHECK(rho(j, j) == 1.0);
  CHECK(rho.maxCoeff() <= 1.0 + 1e-9);
  CHECK(rho.minCoeff() >= -1.0 - 1e-9);
}

TEST_CASE("univariate case reduces to the classical ACF") {
  Rng rng(5);
  Eigen::MatrixXd y = oracle::random_matrix(30, 1, rng);
  const int k = 3;
  const double got = hdts::lag_autocorrelation(Series(y), k)(0, 0);
  CHECK(got == doctest::Approx(oracle::pair_correlation(y, 0, 0, k)).epsilon(1e-12));
}

TEST_CASE("cross correlations match the scalar-pair oracle") {
  Rng rng(17);
  const Eigen::MatrixXd y = oracle::random_matrix(100, 3, rng);
  const Eigen::MatrixXd rho = hdts::lag_autocorrelation(Series(y), 1);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(rho(i, j) ==
            doctest::Approx(oracle::pair_correlation(y, i, j, 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero-variance column is named in the error") {
  Eigen::MatrixXd y(10, 3);
  Rng rng(19);
  for (int t = 0; t < 10; ++t) y.row(t) << rng.normal(), 4.0, rng.normal();
  try {
    hdts::lag_autocorrelation(Series(y), 1);
    FAIL("expected DegenerateColumn");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateColumn);
    CHECK(std::string(e.what()).find("column 1") != std::string::npos);
  }
}

TEST_CASE("hard threshold examples") {
  Eigen::MatrixXd m(2, 2);
  m << 0.5, 0.1, -0.3, 0.05;
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, 0.0, -0.3, 0.0;
  CHECK((hdts::hard_threshold(m, 0.2) - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK((hdts::hard_threshold(m, 0.0) - m).cwiseAbs().maxCoeff() == 0.0);
  CHECK(hdts::hard_threshold(m, 0.51).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(hdts::hard_threshold(m, -0.1), Error);
}

TEST_CASE("hard threshold is idempotent") {
  Rng rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd m = oracle::random_matrix(4, 5, rng);
    const double delta = rng.uniform(0.0, 2.0);
    const Eigen::MatrixXd once = hdts::hard_threshold(m, delta);
    const Eigen::MatrixXd twice = hdts::hard_threshold(once, delta);
    CHECK((once - twice).cwiseAbs().maxCoeff() == 0.0);
  }
}
