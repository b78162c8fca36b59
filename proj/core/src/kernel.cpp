#include "rosce/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "rosce/error.hpp"

namespace rosce {

MaternKernel MaternKernel::defaults_for(const SpaceDomain& domain) {
  MaternKernel k;
  double range = 1.0;
  if (domain.is_continuous()) {
    range = 0.0;
    for (const auto& b : domain.bounds()) range = std::max(range, b.width());
  }
  k.lengthscale = 0.1 * range;
  return k;
}

void MaternKernel::validate() const {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale)) {
    throw ConfigError("Matern lengthscale must be positive");
  }
  if (!(variance >= 0.0) || !(noise >= 0.0) || !std::isfinite(variance) || !std::isfinite(noise)) {
    throw ConfigError("kernel variances must be finite and non-negative");
  }
}

double MaternKernel::cross(const Location& a, const Location& b) const {
  double r2 = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    r2 += d * d;
  }
  const double x = std::sqrt(3.0 * r2) / lengthscale;
  return variance * (1.0 + x) * std::exp(-x);
}

Eigen::MatrixXd MaternKernel::gram(std::span<const Location> locations) const {
  validate();
  const auto n = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = variance + noise;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double v = cross(locations[static_cast<std::size_t>(i)],
                             locations[static_cast<std::size_t>(j)]);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& k) {
  const double scale = k.rows() > 0 ? std::max(k.diagonal().mean(), 0.0) : 0.0;
  double jitter = 0.0;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    Eigen::MatrixXd a = k;
    a.diagonal().array() += jitter * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success && scale > 0.0) return llt.matrixL();
    jitter = attempt == 0 ? 1e-12 : jitter * 10.0;
  }
  throw NumericalError("covariance matrix is not positive definite after jitter 1e-8");
}

}  // namespace rosce
