#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "hdts/coint.hpp"
#include "hdts/dgp.hpp"
#include "hdts/rng.hpp"
#include "oracles.hpp"

using hdts::CointMethod;
using hdts::CointOptions;
using hdts::Error;
using hdts::ExampleConfig;
using hdts::Rng;
using hdts::Series;

TEST_CASE("W_check with K = 0 is the squared covariance") {
  Rng rng(1101);
  const Series s(oracle::random_matrix(50, 3, rng));
  const Eigen::MatrixXd s0 = hdts::lag_autocovariance(s, 0).matrix;
  CHECK((hdts::build_W_check(s, 0) - s0 * s0.transpose()).cwiseAbs().maxCoeff() <
        1e-13);
}

TEST_CASE("W_check matches the loop oracle and is PSD") {
  Rng rng(1103);
  const Eigen::MatrixXd y = oracle::random_matrix(45, 4, rng);
  const Eigen::MatrixXd got = hdts::build_W_check(Series(y), 3);
  const Eigen::MatrixXd expected = oracle::build_W_check(y, 3);
  CHECK((got - expected).cwiseAbs().maxCoeff() <
        1e-12 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
  const auto eig = hdts::sym_eigen(got);
  CHECK(eig.eigenvalues.minCoeff() >= -1e-10);
}

TEST_CASE("mean-ACF classification separates noise from random walks") {
  Rng rng(1105);
  int noise_ok = 0, walk_ok = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng path = rng.fork(rep);
    Eigen::MatrixXd noise(1500, 1);
    for (int t = 0; t < 1500; ++t) noise(t, 0) = path.normal();
    if (hdts::acf_rank(Series(noise), 20, 0.3) == 1) ++noise_ok;

    hdts::ArmaSpec white;
    Rng walk_rng = path.fork(1);
    Eigen::MatrixXd walk(1500, 1);
    walk.col(0) = hdts::sim_integrated(1, white, 1500, walk_rng);
    if (hdts::acf_rank(Series(walk), 20, 0.3) == 0) ++walk_ok;
  }
  CHECK(noise_ok >= 95);
  CHECK(walk_ok >= 95);
}

TEST_CASE("identical columns all share one decision") {
  Rng rng(1107);
  Eigen::VectorXd path(600);
  for (int t = 0; t < 600; ++t) path(t) = rng.normal();
  Eigen::MatrixXd y(600, 4);
  for (int j = 0; j < 4; ++j) y.col(j) = path;
  const int rank = hdts::acf_rank(Series(y), 20, 0.3);
  CHECK((rank == 0 || rank == 4));
}

TEST_CASE("acf_rank matches a per-component score oracle") {
  Rng rng(1109);
  for (int rep = 0; rep < 50; ++rep) {
    Rng path = rng.fork(rep);
    const int n = 60 + int(path.uniform() * 60);
    const int p = 1 + int(path.uniform() * 4);
    const int m = 1 + int(path.uniform() * 10);
    const Eigen::MatrixXd y = oracle::random_matrix(n, p, path);
    const double c0 = path.uniform(0.05, 0.6);
    int expected = 0;
    for (int j = 0; j < p; ++j) {
      if (oracle::acf_rank_score(y.col(j), m) < c0) ++expected;
    }
    CHECK(hdts::acf_rank(Series(y), m, c0) == expected);
  }
}

TEST_CASE("acf_rank is invariant to positive diagonal rescaling") {
  Rng rng(1111);
  const Eigen::MatrixXd y = oracle::random_matrix(300, 4, rng);
  Eigen::VectorXd scale(4);
  scale << 2.0, 0.5, 8.0, 0.25;  // powers of two keep the arithmetic exact
  const Eigen::MatrixXd scaled = y * scale.asDiagonal();
  CHECK(hdts::acf_rank(Series(y), 10, 0.3) ==
        hdts::acf_rank(Series(scaled), 10, 0.3));
}

TEST_CASE("acf_rank is monotone in c0") {
  Rng rng(1113);
  const Eigen::MatrixXd y = oracle::random_matrix(200, 5, rng);
  int previous = 0;
  for (double c0 : {0.05, 0.15, 0.3, 0.5, 0.7}) {
    const int rank = hdts::acf_rank(Series(y), 15, c0);
    CHECK(rank >= previous);
    previous = rank;
  }
}

TEST_CASE("ADF separates stationary AR(1) from random walks") {
  Rng rng(1115);
  int stat_reject = 0, walk_retain = 0;
  for (int rep = 0; rep < 20; ++rep) {
    Rng path = rng.fork(rep);
    hdts::ArmaSpec ar;
    ar.ar = Eigen::VectorXd::Constant(1, 0.5);
    Rng r1 = path.fork(1);
    const Eigen::VectorXd stationary = hdts::sim_arma(ar, 1500, r1);
    if (hdts::adf_test(stationary, 0.01).reject_unit_root) ++stat_reject;

    hdts::ArmaSpec white;
    Rng r2 = path.fork(2);
    const Eigen::VectorXd walk = hdts::sim_integrated(1, white, 1500, r2);
    if (!hdts::adf_test(walk, 0.01).reject_unit_root) ++walk_retain;
  }
  CHECK(stat_reject >= 19);
  CHECK(walk_retain >= 18);
}

TEST_CASE("the stationarity adapter inverts the ADF decision") {
  Rng rng(1117);
  hdts::ArmaSpec ar;
  ar.ar = Eigen::VectorXd::Constant(1, 0.4);
  const Eigen::VectorXd stationary = hdts::sim_arma(ar, 1000, rng);
  const hdts::AdfStationarityTest test;
  CHECK_FALSE(test.reject_stationarity(stationary, 0.01));

  hdts::ArmaSpec white;
  Rng walk_rng(1118);
  const Eigen::VectorXd walk = hdts::sim_integrated(1, white, 1000, walk_rng);
  CHECK(test.reject_stationarity(walk, 0.01));
}

TEST_CASE("example 5 rank via acf, urtest and both") {
  int acf_hits = 0, ur_hits = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto ex = hdts::make_example(ExampleConfig{.id = 5}, Rng(1200 + rep));
    CointOptions both;
    both.type = CointMethod::both;
    const auto fit = hdts::fit_coint(ex.observations, both);
    REQUIRE(fit.per_method_rank.has_value());
    CHECK(fit.rank == fit.per_method_rank->first);
    if (fit.per_method_rank->first == 3) ++acf_hits;
    if (fit.per_method_rank->second == 3) ++ur_hits;
  }
  CHECK(acf_hits >= 9);
  CHECK(ur_hits >= 5);
}

TEST_CASE("a fully stationary panel has full rank") {
  Rng rng(1119);
  int hits = 0;
  for (int rep = 0; rep < 50; ++rep) {
    Eigen::MatrixXd coef = Eigen::MatrixXd::Identity(4, 4) * 0.5;
    Rng path = rng.fork(rep);
    const Eigen::MatrixXd y = hdts::sim_var1(coef, 1500, path);
    if (hdts::fit_coint(Series(y), {}).rank == 4) ++hits;
  }
  CHECK(hits >= 45);
}

TEST_CASE("basis orthogonality and determinism") {
  const auto ex = hdts::make_example(ExampleConfig{.id = 5}, Rng(31));
  const auto first = hdts::fit_coint(ex.observations, {});
  const auto second = hdts::fit_coint(ex.observations, {});
  CHECK((first.A.transpose() * first.A - Eigen::MatrixXd::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
  CHECK((first.A - second.A).cwiseAbs().maxCoeff() == 0.0);
  CHECK(first.rank == second.rank);
}

TEST_CASE("stationary-classified components have the smaller mean ACFs") {
  const auto ex = hdts::make_example(ExampleConfig{.id = 5}, Rng(32));
  const Eigen::MatrixXd w = hdts::build_W_check(ex.observations, 5);
  const auto eig = hdts::sym_eigen(w);
  const Eigen::MatrixXd xt = ex.observations.data() * eig.eigenvectors;

  double min_stationary = 1e9, min_nonstationary = 1e9;
  for (int i = 0; i < 8; ++i) {
    const double score = oracle::acf_rank_score(xt.col(i), 20);
    if (score < 0.3) {
      min_stationary = std::min(min_stationary, 1.0 - score);
    } else {
      min_nonstationary = std::min(min_nonstationary, 1.0 - score);
    }
  }
  REQUIRE(min_stationary < 1e9);
  REQUIRE(min_nonstationary < 1e9);
  CHECK(min_stationary > min_nonstationary);
}

TEST_CASE("lag bounds are validated") {
  Rng rng(1121);
  const Series s(oracle::random_matrix(30, 2, rng));
  CHECK_THROWS_AS(hdts::build_W_check(s, -1), Error);
  CHECK_THROWS_AS(hdts::build_W_check(s, 29), Error);
  CHECK_THROWS_AS(hdts::acf_rank(s, 29, 0.3), Error);
}
