#include "rosce/residualize.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rosce/error.hpp"

namespace rosce {
namespace {

struct NuisanceFits {
  Eigen::VectorXd lambda_w;
  Eigen::VectorXd lambda_v;
  bool converged = true;
};

NuisanceFits fit_both(const Eigen::MatrixXd& design, const Eigen::VectorXd& weights,
                      const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                      const sqrtlasso::Options& solver) {
  const auto w = sqrtlasso::solve({y, design, weights}, solver);
  const auto v = sqrtlasso::solve({z, design, weights}, solver);
  return {w.coefficients, v.coefficients, w.converged && v.converged};
}

void require_covered(const Eigen::MatrixXd& design, std::span<const Location> locations) {
  std::vector<std::size_t> uncovered;
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    if ((design.row(i).tail(design.cols() - 1).array() == 0.0).all()) {
      uncovered.push_back(static_cast<std::size_t>(i));
    }
  }
  if (uncovered.empty()) return;
  std::string msg = "no basis component covers " + std::to_string(uncovered.size()) +
                    " sample location(s):";
  for (std::size_t j = 0; j < uncovered.size() && j < 10; ++j) {
    msg += " #" + std::to_string(uncovered[j] + 1) + ' ' + to_string(locations[uncovered[j]]);
  }
  if (uncovered.size() > 10) msg += " ...";
  throw ConfigError(msg);
}

}  // namespace

ResidualFit ResidualFit::from_residuals(Eigen::VectorXd w_hat, Eigen::VectorXd v_hat) {
  ResidualFit fit;
  fit.w_hat = std::move(w_hat);
  fit.v_hat = std::move(v_hat);
  return fit;
}

Eigen::MatrixXd nuisance_design(const BasisSpec& spec, std::span<const Location> locations) {
  const auto n = static_cast<Eigen::Index>(locations.size());
  Eigen::MatrixXd psi(n, static_cast<Eigen::Index>(spec.dimension()) + 1);
  psi.col(0).setOnes();
  psi.rightCols(psi.cols() - 1) = basis_matrix(spec, locations);
  return psi;
}

Eigen::VectorXd nuisance_penalty_weights(const Eigen::MatrixXd& design) {
  const auto n = static_cast<double>(design.rows());
  Eigen::VectorXd weights = (design.colwise().squaredNorm().transpose() / n / n).cwiseSqrt();
  weights[0] = 0.0;
  return weights;
}

ResidualFit fit_residuals(const Dataset& data, const BasisSpec& spec,
                          const ResidualOptions& options) {
  data.validate();
  const BasisSpec& nuisance = options.nuisance_spec ? *options.nuisance_spec : spec;
  if (!(nuisance.domain() == data.domain)) {
    throw ConfigError("basis domain " + nuisance.domain().describe() +
                      " does not match data domain " + data.domain.describe());
  }
  if (options.cross_fit_folds == 1 || options.cross_fit_folds < 0) {
    throw ConfigError("cross-fitting needs at least 2 folds");
  }

  const Eigen::MatrixXd design = nuisance_design(nuisance, data.s);
  require_covered(design, data.s);

  ResidualFit fit;
  fit.penalty_weights = nuisance_penalty_weights(design);
  fit.exposure_scale = std::max(data.z.cwiseAbs().maxCoeff(), 0.0);

  const auto full = fit_both(design, fit.penalty_weights, data.y, data.z, options.solver);
  fit.lambda_w = full.lambda_w;
  fit.lambda_v = full.lambda_v;
  fit.converged = full.converged;

  if (options.cross_fit_folds >= 2) {
    const auto n = static_cast<Eigen::Index>(data.size());
    const int folds = options.cross_fit_folds;
    if (n < 2 * folds) throw ConfigError("too few observations for the requested folds");
    fit.w_hat.resize(n);
    fit.v_hat.resize(n);
    for (int f = 0; f < folds; ++f) {
      std::vector<Eigen::Index> train;
      std::vector<Eigen::Index> held;
      for (Eigen::Index i = 0; i < n; ++i) (i % folds == f ? held : train).push_back(i);
      const Eigen::MatrixXd d_train = design(train, Eigen::all);
      const Eigen::VectorXd y_train = data.y(train);
      const Eigen::VectorXd z_train = data.z(train);
      const auto part = fit_both(d_train, nuisance_penalty_weights(d_train), y_train, z_train,
                                 options.solver);
      fit.converged = fit.converged && part.converged;
      const Eigen::MatrixXd d_held = design(held, Eigen::all);
      fit.w_hat(held) = data.y(held) - d_held * part.lambda_w;
      fit.v_hat(held) = data.z(held) - d_held * part.lambda_v;
    }
  } else {
    fit.w_hat = data.y - design * fit.lambda_w;
    fit.v_hat = data.z - design * fit.lambda_v;
  }
  return fit;
}

double predict_conditional_mean(const ResidualFit& fit, const BasisSpec& spec, const Location& s,
                                Target which) {
  const Eigen::VectorXd& lambda = which == Target::outcome ? fit.lambda_w : fit.lambda_v;
  if (static_cast<std::size_t>(lambda.size()) != spec.dimension() + 1) {
    throw ConfigError("residual fit has " + std::to_string(lambda.size()) +
                      " coefficients but the basis implies " +
                      std::to_string(spec.dimension() + 1));
  }
  return lambda[0] + lambda.tail(lambda.size() - 1).dot(eval_basis(spec, s));
}

}  // namespace rosce
