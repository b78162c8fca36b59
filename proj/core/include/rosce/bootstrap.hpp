#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rosce/dataset.hpp"
#include "rosce/estimator.hpp"
#include "rosce/spatial_basis.hpp"

namespace rosce {

/// Pointwise confidence band for tau_hat on a query grid.
struct CIBand {
  std::vector<Location> grid;
  Eigen::VectorXd point;  ///< original-sample estimate
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  double level = 0.95;
  int replicates = 0;
  /// Resamples drawn in total, including redraws of degenerate replicates.
  int draws = 0;
  /// Replicate estimates, B x grid size, row b = replicate b.
  Eigen::MatrixXd replicate_values;
};

struct BootstrapOptions {
  int replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  /// Rerun the nuisance fit inside every replicate; otherwise resample the
  /// full-sample residuals and refit only the effect.
  bool refit_nuisance = true;
  /// Worker threads, <= 0 for default_thread_count(). Output does not depend on it.
  int threads = 0;

  /// Throws ConfigError unless 0 < alpha < 1 and replicates >= 100.
  void validate() const;
};

/// Fits an effect model on a (resampled) dataset.
using EffectFitter = std::function<EffectModel(const Dataset&)>;

/// Linear-interpolation quantile (R type 7) of ascending `sorted`, q in [0, 1].
double empirical_quantile(std::span<const double> sorted, double q);

/// [2 point - q_{1-alpha/2}, 2 point - q_{alpha/2}] per grid column of `replicates`.
CIBand pivotal_band(std::span<const Location> grid, const Eigen::VectorXd& point,
                    const Eigen::MatrixXd& replicates, double alpha);

/// [q_{alpha/2}, q_{1-alpha/2}] per grid column of `replicates`.
CIBand percentile_band(std::span<const Location> grid, const Eigen::VectorXd& point,
                       const Eigen::MatrixXd& replicates, double alpha);

/// Bootstrap indices of replicate `index`, redraw `attempt`: n draws with
/// replacement from an Rng seeded with child_seed(seed, index, attempt).
std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::uint64_t index,
                                          std::uint64_t attempt);

/// Pivotal bootstrap band of an arbitrary estimator.
///
/// Replicate b resamples n rows with replacement and refits; a replicate that
/// throws DegenerateExposureError or MissingRegionError is redrawn with the
/// next attempt number. More than 10 B draws in total raise
/// DegenerateExposureError.
CIBand bootstrap_band(const Dataset& data, const EffectFitter& fitter,
                      std::span<const Location> grid, const BootstrapOptions& options);

/// Pivotal bootstrap band of the rosce estimator on `spec`, rerunning the
/// nuisance fit per replicate unless options.refit_nuisance is false.
CIBand bootstrap_band(const Dataset& data, const BasisSpec& spec, std::span<const Location> grid,
                      const BootstrapOptions& options, const FitOptions& fit_options = {});

struct SynthConfig;

/// Per-location quantiles of tau_hat over Monte Carlo datasets for one method.
struct MethodDispersion {
  Method method = Method::rosce;
  Eigen::VectorXd q_lo;
  Eigen::VectorXd q_hi;
  /// sims x grid size.
  Eigen::MatrixXd estimates;
};

struct Dispersion {
  std::vector<Location> grid;
  std::pair<double, double> quantiles{0.05, 0.95};
  /// True tau on the grid for the first simulated dataset.
  Eigen::VectorXd truth;
  std::vector<MethodDispersion> methods;
};

/// Simulates `n_sims` datasets from `dgp` (dataset j uses seed child_seed(seed, j)),
/// fits each method and returns per-location empirical quantiles of tau_hat.
/// Throws ConfigError unless n_sims >= 1 and 0 <= q_lo <= q_hi <= 1.
Dispersion mc_dispersion(const SynthConfig& dgp, int n_sims, std::pair<double, double> quantiles,
                         std::span<const Location> grid, std::uint64_t seed,
                         std::span<const Method> methods, const FitOptions& fit_options,
                         int threads = 0);

}  // namespace rosce
