#pragma once

// Independent reference minimizers for the square-root LASSO
//   F(theta) = sqrt(mean((r - X theta)^2)) + sum_k g_k |theta_k|.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "rosce/sqrtlasso.hpp"

namespace oracle {

inline double objective(const Eigen::VectorXd& r, const Eigen::MatrixXd& x, const Eigen::VectorXd& g,
                        const Eigen::VectorXd& theta) {
  const double n = static_cast<double>(r.size());
  return std::sqrt((r - x * theta).squaredNorm() / n) + g.dot(theta.cwiseAbs());
}

/// Golden-section minimum of a convex function on [lo, hi].
inline double golden(const std::function<double(double)>& f, double lo, double hi, int iters = 90) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  // The kinks at 0 are where penalized minima often sit exactly.
  const double mid = 0.5 * (a + b);
  if (a <= 0.0 && 0.0 <= b && f(0.0) <= f(mid)) return 0.0;
  return mid;
}

/// Nested exact line searches: theta_1 minimizes min_{theta_2..p} F, and so
/// on recursively. Practical for p <= 3. `radius` bounds every coordinate.
inline Eigen::VectorXd nested_line_search(const Eigen::VectorXd& r, const Eigen::MatrixXd& x,
                                          const Eigen::VectorXd& g, double radius) {
  const auto p = x.cols();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  std::function<double(Eigen::Index)> inner = [&](Eigen::Index k) -> double {
    if (k == p) return objective(r, x, g, theta);
    auto f = [&](double t) {
      theta[k] = t;
      return inner(k + 1);
    };
    const double best = golden(f, -radius, radius);
    theta[k] = best;
    return inner(k + 1);
  };
  inner(0);
  return theta;
}

/// Exact minimizer by enumerating active sets and sign patterns (3^p faces).
/// On the face with active set A and signs sigma, the stationary point is
///   theta_A = G^-1 b - t G^-1 (g sigma),  t^2 = m / (1 - q),
/// with G = X_A^T X_A / n, b = X_A^T r / n, m = r^T r / n - b^T G^-1 b and
/// q = (g sigma)^T G^-1 (g sigma). The global minimum is the best
/// sign-consistent face point.
inline Eigen::VectorXd enumerate_faces(const Eigen::VectorXd& r, const Eigen::MatrixXd& x,
                                       const Eigen::VectorXd& g) {
  const auto p = static_cast<int>(x.cols());
  const double n = static_cast<double>(r.size());
  const double rr = r.squaredNorm() / n;
  const Eigen::MatrixXd full_gram = x.transpose() * x / n;
  const Eigen::VectorXd full_b = x.transpose() * r / n;
  Eigen::VectorXd best = Eigen::VectorXd::Zero(p);
  double best_value = objective(r, x, g, best);

  std::vector<int> pattern(static_cast<std::size_t>(p), 0);  // 0 inactive, 1 positive, 2 negative
  for (;;) {
    int k = 0;
    while (k < p && ++pattern[static_cast<std::size_t>(k)] == 3) pattern[static_cast<std::size_t>(k++)] = 0;
    if (k == p) break;

    std::vector<Eigen::Index> active;
    for (int j = 0; j < p; ++j) {
      if (pattern[static_cast<std::size_t>(j)] != 0) active.push_back(j);
    }
    const auto a = static_cast<Eigen::Index>(active.size());
    Eigen::VectorXd gs(a);
    for (Eigen::Index i = 0; i < a; ++i) {
      const auto j = active[static_cast<std::size_t>(i)];
      gs[i] = g[j] * (pattern[static_cast<std::size_t>(j)] == 1 ? 1.0 : -1.0);
    }
    const Eigen::MatrixXd gram = full_gram(active, active);
    const Eigen::VectorXd b = full_b(active);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) continue;
    const Eigen::VectorXd gb = ldlt.solve(b);
    const Eigen::VectorXd gg = ldlt.solve(gs);
    const double m = rr - b.dot(gb);
    const double q = gs.dot(gg);
    if (!(q < 1.0) || m < 0.0) continue;
    const double t = std::sqrt(m / (1.0 - q));
    const Eigen::VectorXd ta = gb - t * gg;

    bool consistent = true;
    for (Eigen::Index i = 0; i < a; ++i) {
      const auto j = active[static_cast<std::size_t>(i)];
      if ((pattern[static_cast<std::size_t>(j)] == 1) != (ta[i] > 0.0) || ta[i] == 0.0) consistent = false;
    }
    if (!consistent) continue;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
    for (Eigen::Index i = 0; i < a; ++i) theta[active[static_cast<std::size_t>(i)]] = ta[i];
    const double value = objective(r, x, g, theta);
    if (value < best_value) {
      best_value = value;
      best = theta;
    }
  }
  return best;
}

struct Instance {
  Eigen::VectorXd response;
  Eigen::MatrixXd design;
  Eigen::VectorXd weights;
};

/// Seeded random instance: X standard normal, sparse true coefficients,
/// weights sqrt(mean(x_k^2) / n) times a factor in [0.3, 4], sometimes 0.
inline Instance random_instance(std::uint64_t seed, int n, int p) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.3, 4.0);
  Instance inst;
  inst.design = Eigen::MatrixXd::NullaryExpr(n, p, [&] { return normal(rng); });
  Eigen::VectorXd truth(p);
  for (int k = 0; k < p; ++k) truth[k] = (k % 3 == 2) ? 0.0 : normal(rng);
  inst.response = inst.design * truth;
  for (int i = 0; i < n; ++i) inst.response[i] += 0.5 * normal(rng);
  inst.weights.resize(p);
  for (int k = 0; k < p; ++k) {
    const double scale = std::sqrt(inst.design.col(k).squaredNorm() / n / n);
    inst.weights[k] = scale * unif(rng);
  }
  if (seed % 4 == 0) inst.weights[0] = 0.0;
  return inst;
}

}  // namespace oracle
