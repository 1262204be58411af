#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "hdts/error.hpp"

namespace hdts {

enum class KernelKind { quadratic_spectral, parzen, bartlett };

/// Smoothing kernel plus bandwidth. An unset bandwidth means "choose it
/// from the data" via andrews_bandwidth at the point of use.
struct KernelSpec {
  KernelKind kind = KernelKind::quadratic_spectral;
  std::optional<double> bandwidth;  // empty = auto
};

KernelKind kernel_kind_from_string(const std::string& name);
std::string to_string(KernelKind kind);

/// K(x) for the chosen kernel. All three satisfy K(0) = 1, K(x) = K(-x)
/// and |K(x)| <= 1.
double kernel_eval(KernelKind kind, double x);
inline double kernel_eval(const KernelSpec& spec, double x) {
  return kernel_eval(spec.kind, x);
}

/// AR(1) plug-in bandwidth: fit a first-order autoregression to each
/// column of `scores`, aggregate into alpha(q) with unit weights, and
/// return c_q (alpha(q) * n)^{1/(2q+1)} with (c_q, q) = (1.1447, 1) for
/// Bartlett, (2.6614, 2) for Parzen, (1.3221, 2) for quadratic spectral.
/// Constant columns are skipped; the result is floored at 1.0 and capped
/// at n/2 so the kernel matrix stays well conditioned.
double andrews_bandwidth(const Eigen::Ref<const Eigen::MatrixXd>& scores,
                         KernelKind kind);

/// The n_tilde x n_tilde matrix with entry (i, j) = K((i - j) / b_n).
/// Symmetric with unit diagonal.
Eigen::MatrixXd theta_matrix(Eigen::Index n_tilde, const KernelSpec& spec);

}  // namespace hdts
