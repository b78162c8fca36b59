#include "rosce/sqrtlasso.hpp"

#include <algorithm>
#include <cmath>

#include "rosce/error.hpp"

namespace rosce::sqrtlasso {
namespace {

constexpr double kNonsmoothRelTol = 1e-12;

bool is_nonsmooth(double residual_sq_norm, double response_sq_norm) {
  return residual_sq_norm <= kNonsmoothRelTol * kNonsmoothRelTol * response_sq_norm;
}

}  // namespace

void Problem::validate() const {
  const auto n = response.size();
  const auto p = design.cols();
  if (n < 1 || p < 1) throw DataError("sqrt-lasso problem needs n >= 1 and p >= 1");
  if (design.rows() != n) {
    throw DataError("design has " + std::to_string(design.rows()) + " rows, response has " +
                    std::to_string(n));
  }
  if (weights.size() != p) {
    throw DataError("expected " + std::to_string(p) + " penalty weights, got " +
                    std::to_string(weights.size()));
  }
  if (!response.allFinite()) throw DataError("response contains non-finite values");
  if (!design.allFinite()) throw DataError("design contains non-finite values");
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw DataError("penalty weights must be finite and non-negative");
  }
}

double objective(const Problem& problem, const Eigen::VectorXd& theta) {
  const auto n = static_cast<double>(problem.response.size());
  const Eigen::VectorXd e = problem.response - problem.design * theta;
  return std::sqrt(e.squaredNorm() / n) + problem.weights.dot(theta.cwiseAbs());
}

double coordinate_minimizer(double a, double b, double c, double weight) {
  // Zero is optimal iff the subgradient at 0, -b / sqrt(c) + weight * [-1, 1], holds 0.
  if (std::abs(b) <= weight * std::sqrt(c)) return 0.0;
  if (weight == 0.0) return b / a;
  // |b| > weight * sqrt(c) >= weight * |b| / sqrt(a) implies weight^2 < a.
  const double m = std::max(c - b * b / a, 0.0);
  const double shrink = weight * std::sqrt(m * a / (a - weight * weight));
  return (b - std::copysign(shrink, b)) / a;
}

KktReport kkt_residual(const Problem& problem, const Eigen::VectorXd& candidate) {
  problem.validate();
  if (candidate.size() != problem.design.cols()) {
    throw DataError("candidate has the wrong number of coefficients");
  }
  const auto n = static_cast<double>(problem.response.size());
  const Eigen::VectorXd e = problem.response - problem.design * candidate;
  const double ee = e.squaredNorm();
  if (ee == 0.0 || is_nonsmooth(ee, problem.response.squaredNorm())) {
    return {0.0, true};
  }
  const double sigma = std::sqrt(ee / n);
  const Eigen::VectorXd grad = -(problem.design.transpose() * e) / (n * sigma);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < grad.size(); ++k) {
    const double w = problem.weights[k];
    const double t = candidate[k];
    const double violation =
        t != 0.0 ? std::abs(grad[k] + std::copysign(w, t)) : std::max(0.0, std::abs(grad[k]) - w);
    worst = std::max(worst, violation);
  }
  return {worst, false};
}

Solution solve(const Problem& problem, const Options& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
  if (options.max_sweeps < 1) throw ConfigError("max_sweeps must be at least 1");

  const auto n = static_cast<double>(problem.response.size());
  const Eigen::Index p = problem.design.cols();
  const auto& X = problem.design;
  const auto& r = problem.response;
  const auto& weights = problem.weights;

  Solution sol;
  sol.coefficients = Eigen::VectorXd::Zero(p);

  const double rr = r.squaredNorm() / n;
  if (rr == 0.0) {
    sol.converged = true;
    return sol;
  }

  Eigen::MatrixXd gram(p, p);
  gram.setZero();
  gram.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose(), 1.0 / n);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();

  auto& theta = sol.coefficients;
  // h = X^T e / n and ee = e^T e / n for the current residual e = r - X theta.
  Eigen::VectorXd h = X.transpose() * r / n;
  double ee = rr;

  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    sol.iterations = sweep;
    double max_change = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      const double a = gram(k, k);
      if (a <= 0.0) continue;  // column identically zero: theta_k stays 0
      const double old = theta[k];
      const double b = h[k] + a * old;
      const double c = std::max(ee + 2.0 * old * h[k] + a * old * old, 0.0);
      const double t = coordinate_minimizer(a, b, c, weights[k]);
      const double delta = t - old;
      if (delta != 0.0) {
        h.noalias() -= gram.col(k) * delta;
        ee = std::max(c - 2.0 * t * b + a * t * t, 0.0);
        theta[k] = t;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (options.record_trace) {
      sol.trace.push_back(std::sqrt(ee) + weights.dot(theta.cwiseAbs()));
    }
    if (max_change < options.tol || is_nonsmooth(ee, rr)) {
      // Refresh the running quantities from the explicit residual; this also
      // removes drift accumulated by the rank-one updates.
      const Eigen::VectorXd e = r - X * theta;
      ee = e.squaredNorm() / n;
      h.noalias() = X.transpose() * e / n;
      if (is_nonsmooth(ee, rr)) {
        sol.converged = true;
        break;
      }
      const double sigma = std::sqrt(ee);
      double worst = 0.0;
      for (Eigen::Index k = 0; k < p; ++k) {
        const double g = -h[k] / sigma;
        const double w = weights[k];
        const double v = theta[k] != 0.0 ? std::abs(g + std::copysign(w, theta[k]))
                                         : std::max(0.0, std::abs(g) - w);
        worst = std::max(worst, v);
      }
      if (max_change < options.tol && worst < 10.0 * options.tol) {
        sol.converged = true;
        break;
      }
    }
  }
  sol.objective_value = objective(problem, theta);
  return sol;
}

}  // namespace rosce::sqrtlasso
