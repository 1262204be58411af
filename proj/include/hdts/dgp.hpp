#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "hdts/rng.hpp"
#include "hdts/series.hpp"

namespace hdts {

/// ARMA(p, q) coefficients for the simulators. The AR polynomial must have
/// all roots outside the unit circle.
struct ArmaSpec {
  Eigen::VectorXd ar;
  Eigen::VectorXd ma;
  double sigma = 1.0;
};

/// Stationary-start-approximated ARMA path: the recursion warms up over a
/// burn-in of 200 observations before the returned stretch begins.
Eigen::VectorXd sim_arma(const ArmaSpec& spec, Eigen::Index n, Rng& rng);

/// VAR(1) path with standard Gaussian innovations and burn-in 200.
Eigen::MatrixXd sim_var1(const Eigen::Ref<const Eigen::MatrixXd>& coefficient,
                         Eigen::Index n, Rng& rng);

/// I(d) path: the inner ARMA path cumulative-summed d times (d in {0,1,2}).
Eigen::VectorXd sim_integrated(int order, const ArmaSpec& inner, Eigen::Index n,
                               Rng& rng);

/// A simulated design together with its ground truth, for the
/// reproducible example datasets (ids 1, 2, 3, 5, 6; the matrix-series
/// design lives with the CP module).
struct ExampleData {
  Series observations;
  std::optional<Series> regressors;               // example 2
  std::optional<int> true_factor_num;             // examples 1, 2
  std::optional<Eigen::MatrixXd> true_loading;    // examples 1, 2
  std::optional<Eigen::MatrixXd> true_reg_coef;   // example 2
  std::optional<Eigen::MatrixXd> true_mixing;     // examples 3, 5
  std::optional<std::vector<std::vector<int>>> true_groups;  // example 3
  std::optional<int> true_coint_rank;             // example 5
};

struct ExampleConfig {
  int id = 1;
  std::optional<Eigen::Index> n;  // override the design's default
  std::optional<Eigen::Index> p;
  bool weak_third_factor = false;  // example 1: divide loading column 3 by p^0.25
};

ExampleData make_example(const ExampleConfig& config, Rng rng);

}  // namespace hdts
