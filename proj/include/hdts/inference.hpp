#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "hdts/kernel.hpp"
#include "hdts/pca.hpp"
#include "hdts/rng.hpp"
#include "hdts/series.hpp"

namespace hdts {

enum class MdsMapKind { linear, quad, custom };

/// Data map phi for the martingale-difference test. A custom map is a
/// precomputed n x d matrix with row t = phi(y_t).
struct MdsMap {
  MdsMapKind kind = MdsMapKind::linear;
  std::optional<Eigen::MatrixXd> values;  // required for kind = custom
};

struct TestOutcome {
  double statistic = 0.0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  int lag_k = 0;
  KernelSpec kernel;  // bandwidth field holds the resolved b_n
  int bootstrap_reps = 0;
  std::optional<MdsMapKind> map_kind;
};

/// B correlated multiplier rows, each distributed N(0, Theta). Sampling
/// factors Theta by Cholesky, retrying once with a 1e-10 jitter, then
/// falls back to the symmetric-eigendecomposition square root with
/// negative eigenvalues floored at zero. Row i comes from the child
/// stream rng.fork(i), so draws are independent of the worker count.
struct MultiplierDraws {
  Eigen::MatrixXd draws;  // B x n_tilde
};

MultiplierDraws draw_multipliers(const Eigen::Ref<const Eigen::MatrixXd>& theta,
                                 int reps, const Rng& rng, int threads = 1);

/// T_WN = max_{k in [K]} max_{i,j} sqrt(n) |rho_hat_{i,j}(k)|.
double wn_statistic(const Series& series, int lag_k = 2);

struct WnTestOptions {
  int lag_k = 2;
  int reps = 1000;  // bootstrap replications
  KernelSpec kernel{KernelKind::quadratic_spectral, std::nullopt};
  double alpha = 0.05;
  bool pre_pca = false;
  PcaOptions pca;  // used when pre_pca is set
  std::uint64_t seed = 0;
  int threads = 1;
};

TestOutcome wn_test(const Series& series, const WnTestOptions& options = {});

/// T_MDS = n sum_{k=1}^{K} |beta_hat_k|_inf^2 with
/// beta_hat_k = (n-k)^{-1} sum_t vec(phi(y_t) y_{t+k}^T). The series is
/// treated as mean zero; nothing is demeaned.
double mds_statistic(const Series& series, int lag_k = 2,
                     const MdsMap& map = {});

struct MdsTestOptions {
  int lag_k = 2;
  int reps = 1000;
  MdsMap map;
  double alpha = 0.05;
  KernelSpec kernel{KernelKind::quadratic_spectral, std::nullopt};
  std::uint64_t seed = 0;
  int threads = 1;
};

TestOutcome mds_test(const Series& series, const MdsTestOptions& options = {});

}  // namespace hdts
