#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rosce/dataset.hpp"
#include "rosce/kernel.hpp"
#include "rosce/residualize.hpp"
#include "rosce/spatial_basis.hpp"
#include "rosce/sqrtlasso.hpp"

namespace rosce {

enum class Method {
  rosce,            ///< robust orthogonalized estimator (square-root LASSO on residuals)
  direct_ls,        ///< joint LS of effect and nuisance coefficients
  naive_region_ls,  ///< per-region no-intercept slope of y on z
  gls_sre,          ///< constant effect by GLS with a spatial random effect
  residual_ls,      ///< unpenalized LS on the residual regression
};

std::string_view to_string(Method m) noexcept;
/// Accepts the names above; "ls" is an alias of residual_ls. Throws ConfigError.
Method parse_method(std::string_view name);

/// tau_hat(s) = phi(s)^T theta.
struct EffectModel {
  Method method = Method::rosce;
  BasisSpec spec = BasisSpec::constant(SpaceDomain::discrete(1));
  Eigen::VectorXd theta;
  /// Per-coordinate uncertainty-set bounds sqrt(mean((v_hat phi_k)^2) / n),
  /// which double as the penalty weights (rosce only; empty otherwise).
  Eigen::VectorXd delta_bounds;
  /// Coordinates with an all-zero residual design column, forced to 0.
  std::vector<std::size_t> dead_coordinates;
  /// direct/residual LS fell back to a 1e-10 ridge on a rank-deficient design.
  bool ridge_fallback = false;
  bool converged = true;

  double effect_at(const Location& s) const;
};

double effect_at(const EffectModel& model, const Location& s);

/// theta_hat = argmin sqrt(mean((w_hat - v_hat phi^T theta)^2)) + sum_k delta_k |theta_k|.
/// Throws DegenerateExposureError when v_hat vanishes.
EffectModel fit_rosce(const ResidualFit& fit, std::span<const Location> locations,
                      const BasisSpec& spec, const sqrtlasso::Options& solver = {});

/// Least squares of w_hat on the rows v_hat_i phi(s_i)^T.
EffectModel fit_residual_ls(const ResidualFit& fit, std::span<const Location> locations,
                            const BasisSpec& spec);

/// Joint LS of y on [z phi(s)^T, phi(s)^T]; returns the effect block.
EffectModel fit_direct_ls(const Dataset& data, const BasisSpec& spec);

/// Per-region sum(y z) / sum(z^2). Throws MissingRegionError for empty regions
/// and DegenerateExposureError when z vanishes in a region.
EffectModel fit_naive_region_ls(const Dataset& data);

/// Constant effect (z^T K^-1 z)^-1 z^T K^-1 y with K the kernel Gram matrix.
EffectModel fit_gls_sre(const Dataset& data, const MaternKernel& kernel);

/// Everything needed to run any method on a dataset.
struct FitOptions {
  BasisSpec spec = BasisSpec::constant(SpaceDomain::discrete(1));
  std::optional<MaternKernel> kernel;  ///< defaults_for(domain) when unset
  ResidualOptions residual;
  sqrtlasso::Options solver;
};

/// Runs `method` on `data`, residualizing first for rosce and residual_ls
/// unless the data are already residual-level.
EffectModel fit_effect(Method method, const Dataset& data, const FitOptions& options);

/// tau_hat at each location.
Eigen::VectorXd evaluate_effect(const EffectModel& model, std::span<const Location> grid);

/// Solves min ||a x - b|| by column-pivoted QR; on numerical rank deficiency
/// uses the ridge (a^T a + 1e-10 * mean(diag(a^T a)) I) x = a^T b and sets
/// `ridge_used`.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, bool& ridge_used);

}  // namespace rosce
