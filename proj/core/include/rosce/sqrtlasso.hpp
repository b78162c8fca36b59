#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rosce::sqrtlasso {

/// min_theta sqrt(mean((response - design * theta)^2)) + sum_k weights_k * |theta_k|
///
/// A zero weight leaves its coordinate unpenalized (used for intercepts).
struct Problem {
  Eigen::VectorXd response;
  Eigen::MatrixXd design;
  Eigen::VectorXd weights;

  /// Throws DataError on shape mismatches, non-finite entries or negative weights.
  void validate() const;
};

struct Options {
  double tol = 1e-8;
  int max_sweeps = 10000;
  /// Record the objective after every sweep in Solution::trace.
  bool record_trace = false;
};

struct Solution {
  Eigen::VectorXd coefficients;
  double objective_value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective after each sweep, only filled when Options::record_trace is set.
  std::vector<double> trace;
};

/// Objective value at `theta`.
double objective(const Problem& problem, const Eigen::VectorXd& theta);

/// Cyclic coordinate descent with exact one-dimensional minimization.
///
/// The Gram matrix X^T X / n is formed once (O(n p^2)); a sweep then costs
/// O(p^2). Converged when the largest coordinate change of a sweep is below
/// `tol` and the KKT residual (recomputed from the explicit residual) is
/// below 10 * tol, or when the residual norm drops below 1e-12 of the
/// response norm. Returns converged = false after `max_sweeps`.
Solution solve(const Problem& problem, const Options& options = {});

struct KktReport {
  /// Largest violation of the subgradient conditions; 0 at an exact optimum.
  double residual = 0.0;
  /// The residual vanishes (relative 1e-12), where the square-root loss has
  /// no gradient. `residual` is reported as 0 in that case.
  bool nonsmooth_point = false;
};

/// Optimality certificate of `candidate`.
///
/// With e = r - X theta and sigma = ||e|| / sqrt(n), the loss gradient is
/// g = -X^T e / (n sigma). Coordinates with theta_k != 0 contribute
/// |g_k + w_k sign(theta_k)|, zero coordinates max(0, |g_k| - w_k).
KktReport kkt_residual(const Problem& problem, const Eigen::VectorXd& candidate);

/// Exact minimizer over t of sqrt(a t^2 - 2 b t + c) + weight |t|, a > 0.
double coordinate_minimizer(double a, double b, double c, double weight);

}  // namespace rosce::sqrtlasso
