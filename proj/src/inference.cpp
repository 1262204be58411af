#include "hdts/inference.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "hdts/spectral.hpp"

namespace hdts {

namespace {

// Factor of Theta such that L z, z ~ N(0, I), has covariance Theta.
Eigen::MatrixXd theta_factor(const Eigen::Ref<const Eigen::MatrixXd>& theta) {
  Eigen::LLT<Eigen::MatrixXd> llt(theta);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::Index n = theta.rows();
  Eigen::LLT<Eigen::MatrixXd> jittered(
      theta + 1e-10 * Eigen::MatrixXd::Identity(n, n));
  if (jittered.info() == Eigen::Success) return jittered.matrixL();
  const SpectralResult eig = sym_eigen(theta);
  return eig.eigenvectors * eig.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Eigen::VectorXd multiplier_row(const Eigen::MatrixXd& factor, const Rng& base,
                               int index) {
  Rng stream = base.fork(std::uint64_t(index));
  return factor * stream.normal_vector(factor.cols());
}

// Run `reps` independent jobs over a fixed-stride worker pool. Each job
// writes only its own slot, so results do not depend on the thread count.
template <typename Job>
void parallel_reps(int reps, int threads, Job job) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (int i = 0; i < reps; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < reps; i = next.fetch_add(1)) job(i);
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

struct BootstrapResult {
  double critical_value = 0.0;
  double p_value = 1.0;
};

// Critical value = floor(B alpha)-th largest draw (the maximum when
// floor(B alpha) = 0); p-value = (1 + #{draw >= statistic}) / (B + 1).
BootstrapResult summarize_bootstrap(std::vector<double> stats, double statistic,
                                    double alpha) {
  const int reps = int(stats.size());
  std::sort(stats.begin(), stats.end(), std::greater<>());
  const int k = std::max(1, int(std::floor(double(reps) * alpha)));
  BootstrapResult out;
  out.critical_value = stats[k - 1];
  int exceed = 0;
  for (double s : stats) {
    if (s >= statistic) ++exceed;
  }
  out.p_value = double(1 + exceed) / double(reps + 1);
  return out;
}

void validate_test_options(Eigen::Index n, int lag_k, int reps, double alpha) {
  if (lag_k < 1 || lag_k > n - 2) {
    fail(ErrorKind::LagOutOfRange, "lag count must lie in [1, n-2]");
  }
  if (reps < 100) fail(ErrorKind::InvalidArgument, "need at least 100 replications");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

double resolve_bandwidth(KernelSpec& kernel, const Eigen::MatrixXd& f) {
  if (!kernel.bandwidth) {
    kernel.bandwidth = andrews_bandwidth(f, kernel.kind);
  } else if (!(*kernel.bandwidth > 0.0)) {
    fail(ErrorKind::InvalidArgument, "bandwidth must be positive");
  }
  return *kernel.bandwidth;
}

Eigen::MatrixXd phi_matrix(const Series& series, const MdsMap& map) {
  switch (map.kind) {
    case MdsMapKind::linear:
      return series.data();
    case MdsMapKind::quad: {
      Eigen::MatrixXd phi(series.n(), 2 * series.p());
      phi.leftCols(series.p()) = series.data();
      phi.rightCols(series.p()) = series.data().array().square();
      return phi;
    }
    case MdsMapKind::custom:
      if (!map.values) {
        fail(ErrorKind::InvalidArgument, "custom map requires a value matrix");
      }
      if (map.values->rows() != series.n()) {
        fail(ErrorKind::ShapeError, "custom map row count differs from n");
      }
      if (map.values->cols() < 1) {
        fail(ErrorKind::ShapeError, "custom map needs at least one column");
      }
      return *map.values;
  }
  fail(ErrorKind::InvalidArgument, "unknown map kind");
}

}  // namespace

MultiplierDraws draw_multipliers(const Eigen::Ref<const Eigen::MatrixXd>& theta,
                                 int reps, const Rng& rng, int threads) {
  if (theta.rows() != theta.cols()) {
    fail(ErrorKind::ShapeError, "theta must be square");
  }
  const Eigen::MatrixXd factor = theta_factor(theta);
  MultiplierDraws out;
  out.draws.resize(reps, theta.rows());
  parallel_reps(reps, threads, [&](int i) {
    out.draws.row(i) = multiplier_row(factor, rng, i).transpose();
  });
  return out;
}

double wn_statistic(const Series& series, int lag_k) {
  if (lag_k < 1 || lag_k > series.n() - 2) {
    fail(ErrorKind::LagOutOfRange, "lag count must lie in [1, n-2]");
  }
  const double root_n = std::sqrt(double(series.n()));
  double stat = 0.0;
  for (int k = 1; k <= lag_k; ++k) {
    stat = std::max(stat,
                    root_n * lag_autocorrelation(series, k).cwiseAbs().maxCoeff());
  }
  return stat;
}

TestOutcome wn_test(const Series& series, const WnTestOptions& options) {
  if (options.pre_pca) {
    const SegmentationFit pca_fit = segment(series, options.pca);
    WnTestOptions inner = options;
    inner.pre_pca = false;
    return wn_test(Series(pca_fit.X), inner);
  }

  const Eigen::Index n = series.n();
  const Eigen::Index p = series.p();
  validate_test_options(n, options.lag_k, options.reps, options.alpha);
  const int K = options.lag_k;
  const Eigen::Index nt = n - K;

  const Eigen::MatrixXd yc = detail::centered(series);

  // f_t stacks the K vectorized lagged cross products; precompute it as an
  // n_tilde x (K p^2) matrix of rows.
  Eigen::MatrixXd f(nt, K * p * p);
  for (Eigen::Index t = 0; t < nt; ++t) {
    for (int k = 1; k <= K; ++k) {
      for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
          f(t, (k - 1) * p * p + j * p + i) = yc(t + k, i) * yc(t, j);
        }
      }
    }
  }

  // Diagonal of I_K (x) Omega-hat, never materialized densely.
  const Eigen::MatrixXd s0 = lag_autocovariance(series, 0).matrix;
  Eigen::VectorXd inv_sd(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (s0(j, j) <= 0.0) {
      fail(ErrorKind::DegenerateColumn,
           "column " + std::to_string(j) + " (0-based) has zero variance");
    }
    inv_sd(j) = 1.0 / std::sqrt(s0(j, j));
  }
  Eigen::VectorXd omega(p * p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < p; ++i) omega(j * p + i) = inv_sd(i) * inv_sd(j);
  }

  TestOutcome outcome;
  outcome.lag_k = K;
  outcome.kernel = options.kernel;
  outcome.bootstrap_reps = options.reps;
  outcome.statistic = wn_statistic(series, K);

  resolve_bandwidth(outcome.kernel, f);
  const Eigen::MatrixXd theta = theta_matrix(nt, outcome.kernel);
  const Eigen::MatrixXd factor = theta_factor(theta);
  const Eigen::MatrixXd ft = f.transpose();  // (K p^2) x n_tilde
  const double scale = 1.0 / std::sqrt(double(nt));
  const Rng base(options.seed);

  std::vector<double> draws(options.reps);
  parallel_reps(options.reps, options.threads, [&](int i) {
    const Eigen::VectorXd eta = multiplier_row(factor, base, i);
    Eigen::VectorXd g = ft * eta;
    double best = 0.0;
    for (Eigen::Index c = 0; c < g.size(); ++c) {
      best = std::max(best, std::abs(g(c)) * omega(c % (p * p)));
    }
    draws[i] = scale * best;
  });

  const BootstrapResult boot =
      summarize_bootstrap(std::move(draws), outcome.statistic, options.alpha);
  outcome.critical_value = boot.critical_value;
  outcome.p_value = boot.p_value;
  outcome.reject = outcome.statistic > outcome.critical_value;
  return outcome;
}

double mds_statistic(const Series& series, int lag_k, const MdsMap& map) {
  const Eigen::Index n = series.n();
  const Eigen::Index p = series.p();
  if (lag_k < 1 || lag_k > n - 2) {
    fail(ErrorKind::LagOutOfRange, "lag count must lie in [1, n-2]");
  }
  const Eigen::MatrixXd phi = phi_matrix(series, map);
  const Eigen::Index d = phi.cols();

  double stat = 0.0;
  for (int k = 1; k <= lag_k; ++k) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p * d);
    for (Eigen::Index t = 0; t + k < n; ++t) {
      for (Eigen::Index i = 0; i < p; ++i) {
        beta.segment(i * d, d) += phi.row(t).transpose() * series.data()(t + k, i);
      }
    }
    beta /= double(n - k);
    const double b = beta.cwiseAbs().maxCoeff();
    stat += b * b;
  }
  return double(n) * stat;
}

TestOutcome mds_test(const Series& series, const MdsTestOptions& options) {
  const Eigen::Index n = series.n();
  const Eigen::Index p = series.p();
  validate_test_options(n, options.lag_k, options.reps, options.alpha);
  const int K = options.lag_k;
  const Eigen::Index nt = n - K;

  const Eigen::MatrixXd phi = phi_matrix(series, options.map);
  const Eigen::Index d = phi.cols();
  const Eigen::Index pd = p * d;

  Eigen::MatrixXd f(nt, K * pd);
  for (Eigen::Index t = 0; t < nt; ++t) {
    for (int k = 1; k <= K; ++k) {
      for (Eigen::Index i = 0; i < p; ++i) {
        f.row(t).segment((k - 1) * pd + i * d, d) =
            phi.row(t) * series.data()(t + k, i);
      }
    }
  }

  TestOutcome outcome;
  outcome.lag_k = K;
  outcome.kernel = options.kernel;
  outcome.bootstrap_reps = options.reps;
  outcome.map_kind = options.map.kind;
  outcome.statistic = mds_statistic(series, K, options.map);

  resolve_bandwidth(outcome.kernel, f);
  const Eigen::MatrixXd theta = theta_matrix(nt, outcome.kernel);
  const Eigen::MatrixXd factor = theta_factor(theta);

  // The bootstrap functional centers f by its sample mean.
  const Eigen::MatrixXd fc = f.rowwise() - f.colwise().mean();
  const Eigen::MatrixXd fct = fc.transpose();  // (K p d) x n_tilde
  const double scale2 = 1.0 / double(nt);
  const Rng base(options.seed);

  std::vector<double> draws(options.reps);
  parallel_reps(options.reps, options.threads, [&](int i) {
    const Eigen::VectorXd eta = multiplier_row(factor, base, i);
    const Eigen::VectorXd g = fct * eta;
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      const double m = g.segment(k * pd, pd).cwiseAbs().maxCoeff();
      total += m * m * scale2;
    }
    draws[i] = total;
  });

  const BootstrapResult boot =
      summarize_bootstrap(std::move(draws), outcome.statistic, options.alpha);
  outcome.critical_value = boot.critical_value;
  outcome.p_value = boot.p_value;
  outcome.reject = outcome.statistic > outcome.critical_value;
  return outcome;
}

}  // namespace hdts
