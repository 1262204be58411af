#pragma once

// Brute-force reference implementations used to pin expected values in the
// unit and acceptance suites. Everything here is written as plain loops,
// independent of the library's matrix algebra paths.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "hdts/cp.hpp"
#include "hdts/rng.hpp"
#include "hdts/series.hpp"

namespace oracle {

inline Eigen::MatrixXd lag_cov(const Eigen::MatrixXd& y, int k) {
  const Eigen::Index n = y.rows();
  const Eigen::Index p = y.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  for (Eigen::Index t = 0; t < n; ++t) {
    for (Eigen::Index j = 0; j < p; ++j) mean(j) += y(t, j);
  }
  mean /= double(n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index t = 0; t + k < n; ++t) {
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        out(i, j) += (y(t + k, i) - mean(i)) * (y(t, j) - mean(j));
      }
    }
  }
  return out / double(n - k);
}

inline double pair_correlation(const Eigen::MatrixXd& y, Eigen::Index i,
                               Eigen::Index j, int k) {
  const Eigen::Index n = y.rows();
  double mi = 0.0, mj = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    mi += y(t, i);
    mj += y(t, j);
  }
  mi /= double(n);
  mj /= double(n);
  double num = 0.0, vi = 0.0, vj = 0.0;
  for (Eigen::Index t = 0; t + k < n; ++t) {
    num += (y(t + k, i) - mi) * (y(t, j) - mj);
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    vi += (y(t, i) - mi) * (y(t, i) - mi);
    vj += (y(t, j) - mj) * (y(t, j) - mj);
  }
  num /= double(n - k);
  vi /= double(n);
  vj /= double(n);
  return num / std::sqrt(vi * vj);
}

inline Eigen::MatrixXd threshold(Eigen::MatrixXd m, double delta) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) < delta) m(i, j) = 0.0;
    }
  }
  return m;
}

inline Eigen::MatrixXd build_W(const Eigen::MatrixXd& y, int lag_k, double delta) {
  const Eigen::Index p = y.cols();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
  for (int k = 1; k <= lag_k; ++k) {
    const Eigen::MatrixXd sk = threshold(lag_cov(y, k), delta);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index l = 0; l < p; ++l) w(i, j) += sk(i, l) * sk(j, l);
      }
    }
  }
  return w;
}

inline Eigen::MatrixXd build_W_check(const Eigen::MatrixXd& y, int lag_k) {
  const Eigen::Index p = y.cols();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
  for (int k = 0; k <= lag_k; ++k) {
    const Eigen::MatrixXd sk = lag_cov(y, k);
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        for (Eigen::Index l = 0; l < p; ++l) w(i, j) += sk(i, l) * sk(j, l);
      }
    }
  }
  return w;
}

inline Eigen::MatrixXd sigma_y_xi(const hdts::MatrixSeries& series,
                                  const Eigen::VectorXd& xi, int k, double delta) {
  const Eigen::Index n = series.n();
  Eigen::MatrixXd ybar = Eigen::MatrixXd::Zero(series.p(), series.q());
  double xibar = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    ybar += series.slice(t);
    xibar += xi(t);
  }
  ybar /= double(n);
  xibar /= double(n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(series.p(), series.q());
  for (Eigen::Index t = k; t < n; ++t) {
    out += (series.slice(t) - ybar) * (xi(t - k) - xibar);
  }
  return threshold(out / double(n - k), delta);
}

inline double wn_statistic(const Eigen::MatrixXd& y, int lag_k) {
  double best = 0.0;
  for (int k = 1; k <= lag_k; ++k) {
    for (Eigen::Index i = 0; i < y.cols(); ++i) {
      for (Eigen::Index j = 0; j < y.cols(); ++j) {
        best = std::max(best, std::abs(pair_correlation(y, i, j, k)));
      }
    }
  }
  return std::sqrt(double(y.rows())) * best;
}

inline double mds_statistic(const Eigen::MatrixXd& y, const Eigen::MatrixXd& phi,
                            int lag_k) {
  const Eigen::Index n = y.rows();
  const Eigen::Index p = y.cols();
  const Eigen::Index d = phi.cols();
  double total = 0.0;
  for (int k = 1; k <= lag_k; ++k) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index a = 0; a < d; ++a) {
        double sum = 0.0;
        for (Eigen::Index t = 0; t + k < n; ++t) sum += phi(t, a) * y(t + k, i);
        best = std::max(best, std::abs(sum / double(n - k)));
      }
    }
    total += best * best;
  }
  return double(n) * total;
}

/// Method-5 style mean autocorrelation S_i(m)/m of one component.
inline double acf_rank_score(const Eigen::VectorXd& x, int m) {
  const Eigen::Index n = x.size();
  double mean = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) mean += x(t);
  mean /= double(n);
  double denom = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) denom += (x(t) - mean) * (x(t) - mean);
  double s = 0.0;
  for (int k = 1; k <= m; ++k) {
    double num = 0.0;
    for (Eigen::Index t = 0; t + k < n; ++t) num += (x(t + k) - mean) * (x(t) - mean);
    s += double(n) * num / (double(n - k) * denom);
  }
  return s / double(m);
}

/// Transitive closure by repeated merging; reference for group_pairs.
inline std::vector<std::vector<int>> closure_groups(
    int p, std::vector<std::pair<int, int>> pairs) {
  std::vector<std::vector<int>> groups;
  for (int v = 0; v < p; ++v) groups.push_back({v});
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [i, j] : pairs) {
      std::size_t gi = 0, gj = 0;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int v : groups[g]) {
          if (v == i) gi = g;
          if (v == j) gj = g;
        }
      }
      if (gi != gj) {
        auto& dst = groups[std::min(gi, gj)];
        auto& src = groups[std::max(gi, gj)];
        dst.insert(dst.end(), src.begin(), src.end());
        groups.erase(groups.begin() + std::ptrdiff_t(std::max(gi, gj)));
        changed = true;
        break;
      }
    }
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     hdts::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

}  // namespace oracle
