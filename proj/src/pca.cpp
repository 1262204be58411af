#include "hdts/pca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hdts/factor.hpp"
#include "hdts/forecast.hpp"
#include "hdts/spectral.hpp"

namespace hdts {

namespace {

struct PairScore {
  int i = 0;
  int j = 0;
  double value = 0.0;  // L statistic or Simes p-value
};

// Cross-correlation stack R[h], h = 0..m, of the testing series.
std::vector<Eigen::MatrixXd> correlation_stack(const Series& z, int m) {
  if (m < 1) fail(ErrorKind::InvalidArgument, "lag window m must be >= 1");
  if (m > z.n() - 2) {
    fail(ErrorKind::LagOutOfRange, "lag window exceeds the usable sample");
  }
  std::vector<Eigen::MatrixXd> stack;
  stack.reserve(m + 1);
  for (int h = 0; h <= m; ++h) stack.push_back(lag_autocorrelation(z, h));
  return stack;
}

double normal_pvalue(double rho, double sqrt_n) {
  // two-sided tail of N(0,1) via the complementary error function
  const double p = std::erfc(sqrt_n * std::abs(rho) / std::sqrt(2.0));
  return std::clamp(p, 1e-300, 1.0);
}

}  // namespace

int max_cc_cutoff(const std::vector<double>& descending) {
  const int aleph = int(descending.size());
  if (aleph < 2) fail(ErrorKind::InvalidArgument, "ratio scan needs >= 2 values");
  const int R = std::max(1, int(std::floor(0.75 * aleph)));
  int best = 1;
  double best_ratio = -std::numeric_limits<double>::infinity();
  for (int j = 1; j <= R; ++j) {
    const double num = descending[j - 1];
    const double den = descending[j];
    double ratio;
    if (num <= 0.0) {
      continue;  // no information past exact zeros
    } else if (den <= 0.0) {
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = num / den;
    }
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = j;
    }
  }
  return best;
}

int fdr_cutoff(const std::vector<double>& ascending_pvalues, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    fail(ErrorKind::InvalidArgument, "beta must lie in (0, 1)");
  }
  const int aleph = int(ascending_pvalues.size());
  int ell = 0;
  for (int k = 1; k <= aleph; ++k) {
    if (ascending_pvalues[k - 1] <= double(k) * beta / double(aleph)) ell = k;
  }
  return ell;
}

std::vector<std::pair<int, int>> connect_max_cc(const Series& z, int m) {
  const int p = int(z.p());
  if (p < 2) fail(ErrorKind::DimensionTooSmall, "connectivity needs p >= 2");
  const auto stack = correlation_stack(z, m);

  std::vector<PairScore> scores;
  scores.reserve(p * (p - 1) / 2);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      double L = 0.0;
      for (int h = 0; h <= m; ++h) {
        L = std::max({L, std::abs(stack[h](i, j)), std::abs(stack[h](j, i))});
      }
      scores.push_back({i, j, L});
    }
  }
  std::sort(scores.begin(), scores.end(), [](const PairScore& a, const PairScore& b) {
    if (a.value != b.value) return a.value > b.value;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });

  int ell;
  if (scores.size() == 1) {
    // Single pair: no ratio to scan; use a conventional significance floor.
    ell = scores[0].value >= 2.0 / std::sqrt(double(z.n())) ? 1 : 0;
  } else {
    std::vector<double> values(scores.size());
    for (std::size_t k = 0; k < scores.size(); ++k) values[k] = scores[k].value;
    ell = max_cc_cutoff(values);
  }

  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < ell; ++k) pairs.emplace_back(scores[k].i, scores[k].j);
  return pairs;
}

std::vector<std::pair<int, int>> connect_fdr(const Series& z, int m, double beta) {
  const int p = int(z.p());
  if (p < 2) fail(ErrorKind::DimensionTooSmall, "connectivity needs p >= 2");
  if (!(beta > 0.0 && beta < 1.0)) {
    fail(ErrorKind::InvalidArgument, "beta must lie in (0, 1)");
  }
  const auto stack = correlation_stack(z, m);
  const double sqrt_n = std::sqrt(double(z.n()));

  std::vector<PairScore> scores;
  scores.reserve(p * (p - 1) / 2);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      std::vector<double> pv;
      pv.reserve(2 * m + 1);
      pv.push_back(normal_pvalue(stack[0](i, j), sqrt_n));
      for (int h = 1; h <= m; ++h) {
        pv.push_back(normal_pvalue(stack[h](i, j), sqrt_n));
        pv.push_back(normal_pvalue(stack[h](j, i), sqrt_n));
      }
      std::sort(pv.begin(), pv.end());
      double simes = 1.0;
      for (std::size_t l = 0; l < pv.size(); ++l) {
        simes = std::min(simes, pv[l] * double(pv.size()) / double(l + 1));
      }
      scores.push_back({i, j, simes});
    }
  }
  std::sort(scores.begin(), scores.end(), [](const PairScore& a, const PairScore& b) {
    if (a.value != b.value) return a.value < b.value;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });

  std::vector<double> pvs(scores.size());
  for (std::size_t k = 0; k < scores.size(); ++k) pvs[k] = scores[k].value;
  const int ell = fdr_cutoff(pvs, beta);

  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < ell; ++k) pairs.emplace_back(scores[k].i, scores[k].j);
  return pairs;
}

Eigen::VectorXd prewhiten_component(const Eigen::Ref<const Eigen::VectorXd>& x,
                                    int max_order) {
  const Eigen::Index n = x.size();
  if (n < 20) fail(ErrorKind::InvalidData, "prewhitening needs n >= 20");
  const ArModel model = fit_ar_aic(x, max_order);
  const int k = model.order;
  Eigen::VectorXd resid(n - k);
  for (Eigen::Index t = k; t < n; ++t) {
    double v = x(t) - model.intercept;
    for (int l = 1; l <= k; ++l) v -= model.coefficients(l - 1) * x(t - l);
    resid(t - k) = v;
  }
  if (k == 0) resid.array() = x.array() - x.mean();
  return resid;
}

std::vector<std::vector<int>> group_pairs(
    int p, const std::vector<std::pair<int, int>>& pairs) {
  if (p < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  std::vector<int> parent(p);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j >= p || i >= j) {
      fail(ErrorKind::InvalidPair,
           "pair (" + std::to_string(i) + ", " + std::to_string(j) +
               ") is out of range for p = " + std::to_string(p));
    }
    parent[find(i)] = find(j);
  }

  std::vector<std::vector<int>> by_root(p);
  for (int v = 0; v < p; ++v) by_root[find(v)].push_back(v);
  std::vector<std::vector<int>> groups;
  for (auto& g : by_root) {
    if (!g.empty()) groups.push_back(std::move(g));  // members already sorted
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

WhitenResult whiten(const Series& series, std::optional<double> ridge) {
  const Eigen::MatrixXd v = lag_autocovariance(series, 0).matrix;
  WhitenResult out;
  out.v_inv_sqrt = inv_sqrt_psd(v, ridge);
  out.series = Series(series.data() * out.v_inv_sqrt);
  return out;
}

SegmentationFit segment(const Series& series, const PcaOptions& options) {
  const Eigen::Index n = series.n();
  const Eigen::Index p = series.p();
  if (options.permutation == Permutation::fdr && !options.beta) {
    fail(ErrorKind::InvalidArgument, "FDR permutation requires beta");
  }

  if (p == 1) {
    const double sd = std::sqrt(lag_autocovariance(series, 0).matrix(0, 0));
    if (sd <= 0.0) fail(ErrorKind::DegenerateColumn, "column 0 has zero variance");
    SegmentationFit fit;
    fit.B = Eigen::MatrixXd::Constant(1, 1, 1.0 / sd);
    fit.X = series.data() / sd;
    fit.groups = {{0}};
    return fit;
  }

  const WhitenResult white = whiten(series, options.ridge);
  double delta = 0.0;
  if (options.thresh) {
    delta = options.delta ? *options.delta
                          : 2.0 * std::sqrt(std::log(double(p)) / double(n));
  }
  const Eigen::MatrixXd wy =
      Eigen::MatrixXd::Identity(p, p) + build_W(white.series, options.lag_k, delta);
  const SpectralResult eig = sym_eigen(wy);

  const Eigen::MatrixXd z = white.series.data() * eig.eigenvectors;  // n x p

  // Connectivity is decided on prewhitened components when requested;
  // residual series are aligned at the end and truncated to a common length.
  Series testing = Series(z);
  if (options.prewhiten) {
    std::vector<Eigen::VectorXd> resid(p);
    Eigen::Index common = n;
    for (Eigen::Index j = 0; j < p; ++j) {
      resid[j] = prewhiten_component(z.col(j));
      common = std::min(common, resid[j].size());
    }
    Eigen::MatrixXd zt(common, p);
    for (Eigen::Index j = 0; j < p; ++j) {
      zt.col(j) = resid[j].tail(common);
    }
    testing = Series(std::move(zt));
  }

  const std::vector<std::pair<int, int>> pairs =
      options.permutation == Permutation::max_cc
          ? connect_max_cc(testing, options.m)
          : connect_fdr(testing, options.m, *options.beta);
  const std::vector<std::vector<int>> raw_groups = group_pairs(int(p), pairs);

  // Rearrange the eigenvector columns so X's column order follows the
  // concatenated group order (smallest member first).
  std::vector<int> perm;
  perm.reserve(p);
  for (const auto& g : raw_groups) perm.insert(perm.end(), g.begin(), g.end());
  std::vector<int> inverse(p);
  for (int k = 0; k < int(p); ++k) inverse[perm[k]] = k;

  SegmentationFit fit;
  fit.X.resize(n, p);
  Eigen::MatrixXd gamma_perm(p, p);
  for (int k = 0; k < int(p); ++k) {
    fit.X.col(k) = z.col(perm[k]);
    gamma_perm.col(k) = eig.eigenvectors.col(perm[k]);
  }
  fit.B = gamma_perm.transpose() * white.v_inv_sqrt;

  int offset = 0;
  for (const auto& g : raw_groups) {
    std::vector<int> block(g.size());
    std::iota(block.begin(), block.end(), offset);
    offset += int(g.size());
    fit.groups.push_back(std::move(block));
  }
  for (const auto& [i, j] : pairs) {
    const int a = inverse[i], b = inverse[j];
    fit.connected_pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(fit.connected_pairs.begin(), fit.connected_pairs.end());
  return fit;
}

Eigen::MatrixXd predict_segments(const SegmentationFit& fit, int steps) {
  if (steps < 1) fail(ErrorKind::InvalidArgument, "steps must be >= 1");
  const Eigen::Index n = fit.X.rows();
  const Eigen::Index p = fit.X.cols();

  Eigen::MatrixXd xf(steps, p);
  for (const auto& group : fit.groups) {
    if (group.size() == 1) {
      const int j = group.front();
      const int max_order = std::min<int>(5, int(n) - 10);
      const ArModel model = fit_ar_aic(fit.X.col(j), max_order);
      xf.col(j) = forecast_ar(model, fit.X.col(j), steps);
    } else {
      const int g = int(group.size());
      Eigen::MatrixXd block(n, g);
      for (int c = 0; c < g; ++c) block.col(c) = fit.X.col(group[c]);
      const int max_order = std::clamp(int((n - 10) / g), 0, 6);
      const VarModel model = fit_var_aic(block, max_order);
      const Eigen::MatrixXd bf = forecast_var(model, block, steps);
      for (int c = 0; c < g; ++c) xf.col(group[c]) = bf.col(c);
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(fit.B);
  Eigen::MatrixXd yf(steps, p);
  for (int h = 0; h < steps; ++h) {
    yf.row(h) = lu.solve(xf.row(h).transpose()).transpose();
  }
  return yf;
}

}  // namespace hdts
