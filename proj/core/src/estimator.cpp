#include "rosce/estimator.hpp"

#include <cmath>

#include "rosce/error.hpp"

namespace rosce {
namespace {

void require_aligned(const ResidualFit& fit, std::span<const Location> locations) {
  const auto n = locations.size();
  if (static_cast<std::size_t>(fit.w_hat.size()) != n ||
      static_cast<std::size_t>(fit.v_hat.size()) != n) {
    throw DataError("residuals and locations differ in length");
  }
  if (n < 1) throw DataError("no observations");
  if (!fit.w_hat.allFinite() || !fit.v_hat.allFinite()) {
    throw DataError("residuals contain non-finite values");
  }
}

void require_exposure_variation(const ResidualFit& fit) {
  const double scale = fit.exposure_scale > 0.0 ? fit.exposure_scale : 1.0;
  if (fit.v_hat.cwiseAbs().maxCoeff() <= 1e-10 * scale) {
    throw DegenerateExposureError(
        "residualized exposure is identically zero; the effect is not identified");
  }
}

// Rows v_hat_i * phi(s_i)^T.
Eigen::MatrixXd residual_design(const ResidualFit& fit, std::span<const Location> locations,
                                const BasisSpec& spec) {
  Eigen::MatrixXd x = basis_matrix(spec, locations);
  x.array().colwise() *= fit.v_hat.array();
  return x;
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::rosce: return "rosce";
    case Method::direct_ls: return "direct_ls";
    case Method::naive_region_ls: return "naive_region_ls";
    case Method::gls_sre: return "gls_sre";
    case Method::residual_ls: return "residual_ls";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "rosce") return Method::rosce;
  if (name == "direct_ls" || name == "direct-ls") return Method::direct_ls;
  if (name == "naive_region_ls" || name == "naive-region-ls") return Method::naive_region_ls;
  if (name == "gls_sre" || name == "gls-sre") return Method::gls_sre;
  if (name == "residual_ls" || name == "residual-ls" || name == "ls") return Method::residual_ls;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

double EffectModel::effect_at(const Location& s) const {
  if (static_cast<std::size_t>(theta.size()) != spec.dimension()) {
    throw ConfigError("effect model has " + std::to_string(theta.size()) +
                      " coefficients for a basis of dimension " + std::to_string(spec.dimension()));
  }
  return eval_basis(spec, s).dot(theta);
}

double effect_at(const EffectModel& model, const Location& s) { return model.effect_at(s); }

Eigen::VectorXd evaluate_effect(const EffectModel& model, std::span<const Location> grid) {
  if (static_cast<std::size_t>(model.theta.size()) != model.spec.dimension()) {
    throw ConfigError("effect model coefficients do not match its basis");
  }
  return basis_matrix(model.spec, grid) * model.theta;
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              bool& ridge_used) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  ridge_used = false;
  if (qr.rank() == a.cols()) return qr.solve(b);
  ridge_used = true;
  Eigen::MatrixXd normal = a.transpose() * a;
  const double mean_diag = normal.cols() > 0 ? normal.diagonal().mean() : 0.0;
  normal.diagonal().array() += 1e-10 * (mean_diag > 0.0 ? mean_diag : 1.0);
  return normal.ldlt().solve(a.transpose() * b);
}

EffectModel fit_rosce(const ResidualFit& fit, std::span<const Location> locations,
                      const BasisSpec& spec, const sqrtlasso::Options& solver) {
  require_aligned(fit, locations);
  require_exposure_variation(fit);
  const auto n = static_cast<double>(locations.size());

  sqrtlasso::Problem problem;
  problem.design = residual_design(fit, locations, spec);
  problem.response = fit.w_hat;
  problem.weights = (problem.design.colwise().squaredNorm().transpose() / n / n).cwiseSqrt();

  EffectModel model;
  model.method = Method::rosce;
  model.spec = spec;
  for (Eigen::Index k = 0; k < problem.weights.size(); ++k) {
    if (problem.weights[k] == 0.0) model.dead_coordinates.push_back(static_cast<std::size_t>(k));
  }
  const auto sol = sqrtlasso::solve(problem, solver);
  model.theta = sol.coefficients;
  model.delta_bounds = problem.weights;
  model.converged = sol.converged;
  return model;
}

EffectModel fit_residual_ls(const ResidualFit& fit, std::span<const Location> locations,
                            const BasisSpec& spec) {
  require_aligned(fit, locations);
  require_exposure_variation(fit);
  EffectModel model;
  model.method = Method::residual_ls;
  model.spec = spec;
  model.theta = least_squares(residual_design(fit, locations, spec), fit.w_hat,
                              model.ridge_fallback);
  return model;
}

EffectModel fit_direct_ls(const Dataset& data, const BasisSpec& spec) {
  data.validate();
  const Eigen::MatrixXd phi = basis_matrix(spec, data.s);
  const Eigen::Index p = phi.cols();
  Eigen::MatrixXd a(phi.rows(), 2 * p);
  a.leftCols(p) = phi.array().colwise() * data.z.array();
  a.rightCols(p) = phi;

  EffectModel model;
  model.method = Method::direct_ls;
  model.spec = spec;
  const Eigen::VectorXd coef = least_squares(a, data.y, model.ridge_fallback);
  model.theta = coef.head(p);
  return model;
}

EffectModel fit_naive_region_ls(const Dataset& data) {
  data.validate();
  if (!data.domain.is_discrete()) {
    throw ConfigError("the per-region baseline needs a discrete domain");
  }
  const int d = data.domain.regions();
  Eigen::VectorXd szz = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd syz = Eigen::VectorXd::Zero(d);
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int k = data.s[i].region_index() - 1;
    const auto idx = static_cast<Eigen::Index>(i);
    szz[k] += data.z[idx] * data.z[idx];
    syz[k] += data.y[idx] * data.z[idx];
    ++counts[static_cast<std::size_t>(k)];
  }
  std::vector<int> missing;
  for (int k = 0; k < d; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) missing.push_back(k + 1);
  }
  if (!missing.empty()) {
    std::string msg = "regions without observations:";
    for (int r : missing) msg += ' ' + std::to_string(r);
    throw MissingRegionError(msg, missing);
  }
  EffectModel model;
  model.method = Method::naive_region_ls;
  model.spec = BasisSpec::indicator(data.domain);
  model.theta.resize(d);
  for (int k = 0; k < d; ++k) {
    if (szz[k] == 0.0) {
      throw DegenerateExposureError("exposure is identically zero in region " +
                                    std::to_string(k + 1));
    }
    model.theta[k] = syz[k] / szz[k];
  }
  return model;
}

EffectModel fit_gls_sre(const Dataset& data, const MaternKernel& kernel) {
  data.validate();
  if (!data.domain.is_continuous()) {
    throw ConfigError("the spatial random effect baseline needs a continuous domain");
  }
  const Eigen::MatrixXd chol = cholesky_with_jitter(kernel.gram(data.s));
  const auto lower = chol.triangularView<Eigen::Lower>();
  const Eigen::VectorXd wz = lower.solve(data.z);
  const Eigen::VectorXd wy = lower.solve(data.y);
  const double zz = wz.squaredNorm();
  if (zz == 0.0) throw DegenerateExposureError("exposure is identically zero");

  EffectModel model;
  model.method = Method::gls_sre;
  model.spec = BasisSpec::constant(data.domain);
  model.theta = Eigen::VectorXd::Constant(1, wz.dot(wy) / zz);
  return model;
}

EffectModel fit_effect(Method method, const Dataset& data, const FitOptions& options) {
  if (data.residual_level && method != Method::rosce && method != Method::residual_ls) {
    throw ConfigError("method " + std::string(to_string(method)) +
                      " needs outcome and exposure, not residual-level data");
  }
  switch (method) {
    case Method::rosce:
    case Method::residual_ls: {
      const ResidualFit fit = data.residual_level
                                  ? [&] {
                                      data.validate();
                                      auto f = ResidualFit::from_residuals(data.y, data.z);
                                      f.exposure_scale = 1.0;
                                      return f;
                                    }()
                                  : fit_residuals(data, options.spec, options.residual);
      if (method == Method::rosce) return fit_rosce(fit, data.s, options.spec, options.solver);
      return fit_residual_ls(fit, data.s, options.spec);
    }
    case Method::direct_ls:
      return fit_direct_ls(data, options.spec);
    case Method::naive_region_ls:
      return fit_naive_region_ls(data);
    case Method::gls_sre:
      return fit_gls_sre(data, options.kernel ? *options.kernel
                                              : MaternKernel::defaults_for(data.domain));
  }
  throw ConfigError("unsupported method");
}

}  // namespace rosce
