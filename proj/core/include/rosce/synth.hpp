#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "rosce/dataset.hpp"
#include "rosce/kernel.hpp"
#include "rosce/spatial_basis.hpp"

namespace rosce {

namespace effect {
struct Zero {};
/// cos(2 pi (s - lower) / period) on a 1-D domain.
struct Cosine1d {
  double period = 10.0;
};
/// cos(2 pi s1 / period + 2 pi s2 / period).
struct Cosine2d {
  double period = 20.0;
};
/// cos(2 pi s / (2 d)) on regions 1..d.
struct CosineRegions {};
/// phi(s)^T theta0; theta0 is drawn from N(0, I) when empty.
struct Parametric {
  BasisSpec spec;
  Eigen::VectorXd theta0;
};
}  // namespace effect

using EffectFn =
    std::variant<effect::Zero, effect::Cosine1d, effect::Cosine2d, effect::CosineRegions,
                 effect::Parametric>;

namespace nuisance {
struct None {};
/// beta(s) = c(s), a draw of a GP with the given kernel at the sample locations.
struct GpMatern {
  MaternKernel kernel;
};
/// beta(s) = phi0(s)^T eta with eta ~ N(0, scale^2 I).
struct BsplineRandom {
  BasisSpec spec;
  double scale = 1.0;
};
/// beta(s) = intercept + slope * s on regions.
struct LinearRegion {
  double intercept = 2.0;
  double slope = -1.0;
};
}  // namespace nuisance

using NuisanceFn =
    std::variant<nuisance::None, nuisance::GpMatern, nuisance::BsplineRandom, nuisance::LinearRegion>;

/// E[z|s] = nuisance_coef * beta(s) + effect_coef * tau(s).
struct ExposureLink {
  double nuisance_coef = 0.0;
  double effect_coef = 0.0;
};

enum class Sampling {
  uniform,  ///< i.i.d. uniform over the domain
  grid,     ///< evenly spaced over a 1-D interval, endpoints included
};

/// Data-generating process
///   y = tau(s) z + beta(s) + eps_y,  z = E[z|s] + eps_z.
/// With `residual_level` set the generator instead emits residual-regression
/// data: v_hat ~ N(0, noise_sd_z^2), v_tilde ~ N(0, v_tilde_sd^2),
/// w_hat = tau(s) (v_hat + v_tilde) + eps_y, stored as y = w_hat, z = v_hat.
struct SynthConfig {
  std::string name = "custom";
  SpaceDomain domain = SpaceDomain::discrete(1);
  EffectFn effect = effect::Zero{};
  NuisanceFn nuisance = nuisance::None{};
  ExposureLink link;
  double noise_sd_y = 0.0;
  double noise_sd_z = 1.0;
  double v_tilde_sd = 1.0;
  bool residual_level = false;
  Sampling sampling = Sampling::uniform;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  /// Seed of the theta0 draw of a Parametric effect; `seed` when unset.
  std::optional<std::uint64_t> theta0_seed;

  /// Throws ConfigError on invalid sizes, variances or mismatched domains.
  void validate() const;
};

/// Ground truth behind a synthetic dataset.
struct Truth {
  EffectFn effect;
  SpaceDomain domain = SpaceDomain::discrete(1);
  Eigen::VectorXd beta;        ///< beta(s_i) (the confounder c(s_i) for GP nuisances)
  Eigen::VectorXd eps_y;       ///< outcome noise draws
  Eigen::VectorXd eps_z;       ///< exposure noise draws
  Eigen::VectorXd exposure_mean;
  Eigen::VectorXd v_tilde;     ///< residual-level only
  Eigen::VectorXd eta;         ///< B-spline nuisance coefficients, when drawn

  /// tau(s).
  double tau(const Location& s) const;
};

struct SynthOutput {
  Dataset data;
  Truth truth;
};

/// Draws a dataset. Bitwise reproducible from (config, seed).
SynthOutput generate(const SynthConfig& config);

enum class GpCase { fixed_zero, heterogeneous };

/// 1-D [0, 10], y = tau(s) z + c(s), z = c(s) + eps with eps ~ N(0, 1) and c
/// from the default Matern + white-noise GP. tau = 0 or cos(2 pi s / 10).
SynthConfig gp_example_config(GpCase which, std::size_t n, std::uint64_t seed);
SynthOutput gen_gp_example(GpCase which, std::size_t n, std::uint64_t seed);

/// [0, 10]^2, tau = cos(2 pi s1/20 + 2 pi s2/20), beta = phi0^T eta with
/// N_s = 10 and support 0.2 x 10, z ~ N(0.5 beta, 1), eps ~ N(0, 0.2^2).
SynthConfig experiment_2d_config(std::size_t n, std::uint64_t seed);
SynthOutput gen_2d_experiment(std::size_t n = 676, std::uint64_t seed = 0);

/// Regions 1..d, tau = cos(2 pi s / (2d)), beta = 2 - s, z ~ N(tau(s), 1), eps ~ N(0, 0.2^2).
SynthConfig discrete_experiment_config(std::size_t n, int d, std::uint64_t seed);
SynthOutput gen_discrete_experiment(std::size_t n = 500, int d = 5, std::uint64_t seed = 0);

/// The 1-D basis of the errors-in-variables experiment: d_theta components
/// on [0, 10] with support 0.2 x 10.
BasisSpec eiv_basis(int d_theta);

/// Residual-level data on an even grid of [0, 10]: tau = phi^T theta0,
/// v_hat, v_tilde ~ N(0, 1), w_hat = tau(s) (v_hat + v_tilde).
SynthConfig eiv_experiment_config(std::size_t n, int d_theta, std::uint64_t seed,
                                  std::optional<std::uint64_t> theta0_seed = std::nullopt);
SynthOutput gen_eiv_experiment(std::size_t n = 41, int d_theta = 10, std::uint64_t seed = 0,
                               std::optional<std::uint64_t> theta0_seed = std::nullopt);

/// The three-level B-spline basis used for the 2-D experiment:
/// N_s = 10 per axis with supports 0.2, 0.4 and 0.85 of the range.
BasisSpec multiresolution_basis_2d(const SpaceDomain& domain);

}  // namespace rosce
