#pragma once

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "rosce/dataset.hpp"
#include "rosce/spatial_basis.hpp"
#include "rosce/sqrtlasso.hpp"

namespace rosce {

/// Fitted predictors of E[y|s] and E[z|s] and the empirical residuals.
///
/// Both predictors are linear in psi(s) = (1, phi(s)):
///   w_hat_i = y_i - psi(s_i)^T lambda_w,  v_hat_i = z_i - psi(s_i)^T lambda_v.
struct ResidualFit {
  Eigen::VectorXd lambda_w;
  Eigen::VectorXd lambda_v;
  Eigen::VectorXd w_hat;
  Eigen::VectorXd v_hat;
  /// Penalty weights of the nuisance programs (first entry 0: intercept).
  Eigen::VectorXd penalty_weights;
  /// max |z_i|, the scale against which a vanishing v_hat is judged.
  double exposure_scale = 1.0;
  bool converged = true;

  /// Wraps residuals that were observed or simulated directly.
  static ResidualFit from_residuals(Eigen::VectorXd w_hat, Eigen::VectorXd v_hat);
};

struct ResidualOptions {
  /// Basis for the nuisance predictors; the effect basis when unset.
  std::optional<BasisSpec> nuisance_spec;
  /// K >= 2 enables K-fold cross-fitting of the residuals (fold of i is i mod K).
  /// lambda_w and lambda_v are then still the full-sample fits.
  int cross_fit_folds = 0;
  sqrtlasso::Options solver;
};

/// psi(s) rows: a leading column of ones followed by phi(s)^T.
Eigen::MatrixXd nuisance_design(const BasisSpec& spec, std::span<const Location> locations);

/// gamma_1 = 0 and gamma_k = sqrt(mean(psi_k^2) / n) for k >= 2.
Eigen::VectorXd nuisance_penalty_weights(const Eigen::MatrixXd& design);

/// Fits lambda_w and lambda_v by weighted square-root LASSO and returns the
/// residuals. Throws ConfigError when some sample location has phi(s) = 0
/// (no basis component covers it), naming those locations.
ResidualFit fit_residuals(const Dataset& data, const BasisSpec& spec,
                          const ResidualOptions& options = {});

enum class Target { outcome, exposure };

/// psi(s)^T lambda for the selected target. `spec` must be the basis the fit used.
double predict_conditional_mean(const ResidualFit& fit, const BasisSpec& spec, const Location& s,
                                Target which);

}  // namespace rosce
