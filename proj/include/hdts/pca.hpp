#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "hdts/series.hpp"

namespace hdts {

enum class Permutation { max_cc, fdr };

/// Segmentation of a panel into uncorrelated subseries. Columns of X are
/// ordered group-by-group (groups sorted by their smallest member in the
/// eigenvector ordering), so `groups` is a partition of {0..p-1} into
/// contiguous blocks and `connected_pairs` is expressed in the same final
/// column indexing.
struct SegmentationFit {
  Eigen::MatrixXd B;  // p x p transformation, x_hat_t = B y_t
  Eigen::MatrixXd X;  // n x p transformed series
  std::vector<std::vector<int>> groups;
  std::vector<std::pair<int, int>> connected_pairs;
};

struct PcaOptions {
  int lag_k = 5;
  Permutation permutation = Permutation::max_cc;
  bool thresh = false;
  std::optional<double> delta;  // default 2 sqrt(log p / n) when thresh is on
  bool prewhiten = true;
  int m = 10;                   // lag window of the connectivity null
  std::optional<double> beta;   // FDR level, required for permutation = fdr
  std::optional<double> ridge;  // whitening ridge, empty = auto
};

struct WhitenResult {
  Series series;                // rows are V^{-1/2} y_t
  Eigen::MatrixXd v_inv_sqrt;   // p x p
};

/// Replace y_t by V_hat^{-1/2} y_t with V_hat the sample covariance. With
/// ridge 0 the output has sample covariance I to machine precision; an
/// unset ridge engages the PSD floor only when V_hat is singular.
WhitenResult whiten(const Series& series,
                    std::optional<double> ridge = std::nullopt);

/// Maximum-cross-correlation connectivity: L_n(i,j) = max_{|h|<=m}
/// |rho_hat_{i,j}(h)|, the ratio scan over the sorted L's picks the number
/// of connected pairs. For a single pair (p = 2) the ratio scan is empty
/// and the pair is declared connected iff L >= 2/sqrt(n).
std::vector<std::pair<int, int>> connect_max_cc(const Series& z, int m);

/// FDR-based connectivity at level beta: per-pair Simes p-values over lags
/// |h| <= m, then the step-up cutoff over all p(p-1)/2 pairs.
std::vector<std::pair<int, int>> connect_fdr(const Series& z, int m, double beta);

/// Ratio cutoff of Method-style scans on descending values; exposed for
/// direct testing. Returns the number of leading entries declared
/// significant.
int max_cc_cutoff(const std::vector<double>& descending);

/// FDR step-up cutoff on ascending p-values: max{k : pv_(k) <= k beta / N}.
int fdr_cutoff(const std::vector<double>& ascending_pvalues, double beta);

/// Residuals of the AIC-best AR(k) fit, k in 0..max_order; length n - k
/// (order 0 returns the demeaned series).
Eigen::VectorXd prewhiten_component(const Eigen::Ref<const Eigen::VectorXd>& x,
                                    int max_order = 5);

/// Connected components of the undirected pair graph over {0..p-1};
/// singletons for untouched indices, groups ordered by smallest member.
std::vector<std::vector<int>> group_pairs(
    int p, const std::vector<std::pair<int, int>>& pairs);

SegmentationFit segment(const Series& series, const PcaOptions& options = {});

/// h x p forecast: singleton groups by AR-AIC, larger groups by VAR-AIC,
/// mapped back through B^{-1}.
Eigen::MatrixXd predict_segments(const SegmentationFit& fit, int steps);

}  // namespace hdts
