#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "hdts/series.hpp"

namespace hdts {

enum class CointMethod { acf, urtest, both };

/// Cointegration fit: the orthogonal eigenbasis of W_check (eigenvalues
/// descending, so the trailing columns span the estimated cointegration
/// space) and the estimated rank.
struct CointFit {
  Eigen::MatrixXd A;  // p x p orthogonal
  int rank = 0;       // headline rank (acf value under method = both)
  CointMethod method = CointMethod::acf;
  std::optional<std::pair<int, int>> per_method_rank;  // (acf, urtest)
};

/// Stationarity test plugged into the unit-root rank scan: returns true
/// when the null "x is I(0)" is REJECTED at level alpha.
class UnitRootTest {
 public:
  virtual ~UnitRootTest() = default;
  virtual bool reject_stationarity(const Eigen::Ref<const Eigen::VectorXd>& x,
                                   double alpha) const = 0;
};

/// Augmented Dickey-Fuller with constant; lag order by Ng-Perron modified
/// AIC up to floor(12 (n/100)^{1/4}); MacKinnon response-surface critical
/// values at the 1%, 5% and 10% levels (alpha maps to the nearest
/// tabulated level).
/// ADF tests the reverse null (unit root), so the I(0) null is declared
/// rejected exactly when ADF fails to reject its unit root at alpha. This
/// adapter substitutes for the unit-root test the rank scan was designed
/// around, whose internals are out of scope.
class AdfStationarityTest : public UnitRootTest {
 public:
  bool reject_stationarity(const Eigen::Ref<const Eigen::VectorXd>& x,
                           double alpha) const override;
};

/// ADF regression core: t-statistic of the lagged level and the critical
/// value at `alpha` in {0.01, 0.05, 0.10} (nearest). Exposed for tests.
struct AdfResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  int lag_order = 0;
  bool reject_unit_root = false;
};
AdfResult adf_test(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha);

struct CointOptions {
  int lag_k = 5;
  CointMethod type = CointMethod::acf;
  double c0 = 0.3;
  int m = 20;
  double alpha = 0.01;
  const UnitRootTest* unit_root = nullptr;  // default: AdfStationarityTest
};

/// W_check = sum_{k=0}^{K} Sigma_hat(k) Sigma_hat(k)^T; unlike the factor
/// W this sum includes the k = 0 term.
Eigen::MatrixXd build_W_check(const Series& series, int lag_k = 5);

/// Count of components classified stationary: S_i(m)/m < c0 with
/// S_i(m) = sum_{k=1}^{m} rho_hat_i(k) and the n/(n-k) normalization of
/// the per-component autocorrelations.
int acf_rank(const Series& transformed, int m = 20, double c0 = 0.3);

CointFit fit_coint(const Series& series, const CointOptions& options = {});

}  // namespace hdts
