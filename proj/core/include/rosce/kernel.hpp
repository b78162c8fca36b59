#pragma once

#include <span>

#include <Eigen/Dense>

#include "rosce/space.hpp"

namespace rosce {

/// Matern nu = 3/2 covariance plus white noise:
///   k(s, s') = variance * (1 + sqrt(3) r / l) exp(-sqrt(3) r / l) + noise * [s == s'],
/// with r the Euclidean distance. The white-noise term applies to the
/// diagonal of a Gram matrix (same sample), not to distinct samples that
/// happen to share coordinates.
struct MaternKernel {
  double lengthscale = 1.0;
  double variance = 1.0;
  double noise = 0.1;

  /// Lengthscale 10% of the largest axis range, unit variance, noise 0.1.
  static MaternKernel defaults_for(const SpaceDomain& domain);

  /// Throws ConfigError for a non-positive lengthscale or negative variances.
  void validate() const;

  /// Covariance between two distinct samples (no white-noise contribution).
  double cross(const Location& a, const Location& b) const;

  Eigen::MatrixXd gram(std::span<const Location> locations) const;
};

/// Lower Cholesky factor of `k`, adding diagonal jitter 1e-12, 1e-11, ...,
/// up to 1e-8 (relative to the mean diagonal) when needed. Throws
/// NumericalError when the matrix is still not positive definite.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& k);

}  // namespace rosce
