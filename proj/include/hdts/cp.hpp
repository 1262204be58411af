#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "hdts/rng.hpp"
#include "hdts/series.hpp"

namespace hdts {

/// An n x p x q array of matrix observations, stored as vectorized slices:
/// column t of vecs() is vec(Y_t) (column-major stacking).
class MatrixSeries {
 public:
  MatrixSeries() = default;
  MatrixSeries(Eigen::MatrixXd vecs, Eigen::Index p, Eigen::Index q);
  explicit MatrixSeries(const std::vector<Eigen::MatrixXd>& slices);

  Eigen::Index n() const noexcept { return vecs_.cols(); }
  Eigen::Index p() const noexcept { return p_; }
  Eigen::Index q() const noexcept { return q_; }

  const Eigen::MatrixXd& vecs() const noexcept { return vecs_; }
  Eigen::Map<const Eigen::MatrixXd> slice(Eigen::Index t) const {
    return {vecs_.col(t).data(), p_, q_};
  }

  MatrixSeries transposed() const;

 private:
  Eigen::MatrixXd vecs_;  // (p*q) x n
  Eigen::Index p_ = 0;
  Eigen::Index q_ = 0;
};

enum class CpMethod { direct, refined };

/// CP factor fit: Y_t ~ A X_t B^T with diagonal X_t. Every column of A and
/// B has unit Euclidean norm and the largest-magnitude entry nonnegative.
struct CpFit {
  Eigen::MatrixXd A;        // p x d_hat
  Eigen::MatrixXd B;        // q x d_hat
  Eigen::MatrixXd factors;  // n x d_hat
  int rank = 0;
  CpMethod method = CpMethod::direct;
};

struct CpOptions {
  std::optional<Eigen::VectorXd> xi;  // empty = PCA-based default
  int lag_k = 20;                     // K of the refined method
  bool thresh1 = false;
  bool thresh2 = false;
  std::optional<double> delta1;  // default 2 sqrt(log(pq)/n) when thresh1
  std::optional<double> delta2;  // same default, refined method only
  std::optional<Eigen::VectorXd> w;  // refined weight, default vec(I)/|vec(I)|
};

/// Default projection series: xi_t = v^T vec(Y_t) with v the leading
/// eigenvector of the sample covariance of vec(Y_t); returned demeaned.
Eigen::VectorXd default_xi(const MatrixSeries& series);

/// (n-k)^{-1} sum_{t=k+1}^{n} (Y_t - Ybar)(xi_{t-k} - xibar), hard
/// thresholded entrywise at delta.
Eigen::MatrixXd sigma_y_xi(const MatrixSeries& series,
                           const Eigen::Ref<const Eigen::VectorXd>& xi, int k,
                           double delta);

CpFit cp_direct(const MatrixSeries& series, const CpOptions& options = {});

CpFit cp_refined(const MatrixSeries& series, const CpOptions& options = {});

/// Generated CP design plus its ground truth.
struct CpDgp {
  MatrixSeries series;
  Eigen::MatrixXd A;        // p x d, unit-norm columns, rank d1
  Eigen::MatrixXd B;        // q x d, unit-norm columns, rank d2
  Eigen::MatrixXd factors;  // n x d
};

/// Seeded generator for the CP simulation design: uniform(-3,3) seed
/// loadings reduced to ranks (d1, d2) through their leading singular
/// subspaces, AR(1) factors with |coefficient| in [0.6, 0.95], standard
/// Gaussian noise.
CpDgp dgp_cp(Eigen::Index n, Eigen::Index p, Eigen::Index q, int d, int d1,
             int d2, Rng rng);

/// h forecast slices: each factor path forecast by AR-AIC, recombined as
/// sum_l x_hat(l) a_l b_l^T.
std::vector<Eigen::MatrixXd> predict_cp(const CpFit& fit, int steps,
                                        int ar_max_order = 5);

namespace detail {

/// Intermediates of the refined method, exposed so the reduced
/// cross-covariance construction (with its Kronecker index layout) can be
/// verified against a literal materialization. Orientation: assumes the
/// series already satisfies q <= p.
struct RefinedIntermediates {
  int d = 0;
  Eigen::MatrixXd P;        // p x d, left subspace
  Eigen::MatrixXd Q;        // q x d, right subspace
  Eigen::VectorXd w;        // resolved weight vector, length d^2
  Eigen::MatrixXd s1;       // Sigma_check(1), d x d
  Eigen::MatrixXd s2;       // Sigma_check(2), d x d
};

RefinedIntermediates refined_intermediates(const MatrixSeries& series,
                                           const CpOptions& options);

}  // namespace detail

}  // namespace hdts
