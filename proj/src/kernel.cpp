#include "hdts/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hdts {

KernelKind kernel_kind_from_string(const std::string& name) {
  if (name == "qs" || name == "QS") return KernelKind::quadratic_spectral;
  if (name == "par" || name == "Par" || name == "parzen") return KernelKind::parzen;
  if (name == "bart" || name == "Bart" || name == "bartlett") return KernelKind::bartlett;
  fail(ErrorKind::InvalidArgument, "unknown kernel '" + name + "' (expected qs|par|bart)");
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::quadratic_spectral: return "qs";
    case KernelKind::parzen: return "par";
    case KernelKind::bartlett: return "bart";
  }
  return "?";
}

double kernel_eval(KernelKind kind, double x) {
  const double a = std::abs(x);
  switch (kind) {
    case KernelKind::bartlett:
      return a < 1.0 ? 1.0 - a : 0.0;
    case KernelKind::parzen:
      if (a <= 0.5) return 1.0 - 6.0 * a * a + 6.0 * a * a * a;
      if (a <= 1.0) {
        const double u = 1.0 - a;
        return 2.0 * u * u * u;
      }
      return 0.0;
    case KernelKind::quadratic_spectral: {
      const double z = 6.0 * std::numbers::pi * a / 5.0;
      if (a < 0.01) {
        // series around 0; the closed form cancels catastrophically here
        return 1.0 - z * z / 10.0 + z * z * z * z / 280.0;
      }
      return 25.0 / (12.0 * std::numbers::pi * std::numbers::pi * a * a) *
             (std::sin(z) / z - std::cos(z));
    }
  }
  return 0.0;
}

namespace {

struct Ar1Fit {
  double rho = 0.0;
  double sigma2 = 0.0;  // innovation variance
  bool ok = false;
};

Ar1Fit fit_ar1(const Eigen::Ref<const Eigen::VectorXd>& x) {
  Ar1Fit fit;
  const Eigen::Index n = x.size();
  if (x.maxCoeff() == x.minCoeff()) return fit;  // constant, skip
  const Eigen::VectorXd c = x.array() - x.mean();
  const double g0 = c.squaredNorm() / double(n);
  if (g0 <= 0.0) return fit;
  const double g1 = c.tail(n - 1).dot(c.head(n - 1)) / double(n);
  fit.rho = g1 / g0;
  fit.sigma2 = g0 * (1.0 - fit.rho * fit.rho);
  fit.ok = true;
  return fit;
}

}  // namespace

double andrews_bandwidth(const Eigen::Ref<const Eigen::MatrixXd>& scores,
                         KernelKind kind) {
  const Eigen::Index n = scores.rows();
  const Eigen::Index m = scores.cols();
  if (n < 4 || m < 1) {
    fail(ErrorKind::InvalidData, "bandwidth selection needs n >= 4 and m >= 1");
  }

  // Unit-weight aggregates over the per-column AR(1) fits.
  double num = 0.0, den = 0.0;
  const int q = (kind == KernelKind::bartlett) ? 1 : 2;
  Eigen::Index used = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Ar1Fit fit = fit_ar1(scores.col(j));
    if (!fit.ok) continue;
    ++used;
    const double rho = fit.rho;
    const double s4 = fit.sigma2 * fit.sigma2;
    const double omr = 1.0 - rho;
    den += s4 / std::pow(omr, 4);
    if (q == 1) {
      num += 4.0 * rho * rho * s4 / (std::pow(omr, 6) * std::pow(1.0 + rho, 2));
    } else {
      num += 4.0 * rho * rho * s4 / std::pow(omr, 8);
    }
  }
  if (used == 0) {
    fail(ErrorKind::BandwidthUndefined, "every column is constant");
  }

  double cq = 0.0;
  switch (kind) {
    case KernelKind::bartlett: cq = 1.1447; break;
    case KernelKind::parzen: cq = 2.6614; break;
    case KernelKind::quadratic_spectral: cq = 1.3221; break;
  }

  double bn;
  if (!std::isfinite(num) || !std::isfinite(den) || den <= 0.0) {
    bn = std::numeric_limits<double>::infinity();  // rho pinned at 1, cap below
  } else {
    const double alpha_q = num / den;
    bn = cq * std::pow(alpha_q * double(n), 1.0 / double(2 * q + 1));
  }
  bn = std::clamp(bn, 1.0, double(n) / 2.0);
  return bn;
}

Eigen::MatrixXd theta_matrix(Eigen::Index n_tilde, const KernelSpec& spec) {
  if (n_tilde < 1) fail(ErrorKind::ShapeError, "theta matrix needs n >= 1");
  if (!spec.bandwidth) {
    fail(ErrorKind::InvalidArgument, "theta matrix requires a resolved bandwidth");
  }
  const double bn = *spec.bandwidth;
  Eigen::MatrixXd theta(n_tilde, n_tilde);
  for (Eigen::Index i = 0; i < n_tilde; ++i) {
    theta(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = kernel_eval(spec.kind, double(i - j) / bn);
      theta(i, j) = v;
      theta(j, i) = v;
    }
  }
  return theta;
}

}  // namespace hdts
