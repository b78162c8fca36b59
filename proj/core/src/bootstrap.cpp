#include "rosce/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rosce/error.hpp"
#include "rosce/parallel.hpp"
#include "rosce/rng.hpp"
#include "rosce/synth.hpp"

namespace rosce {
namespace {

using ReplicateFn = std::function<Eigen::VectorXd(const std::vector<std::size_t>&)>;

Eigen::MatrixXd run_replicates(std::size_t n, std::size_t grid_size, const ReplicateFn& replicate,
                               const BootstrapOptions& options, int& total_draws) {
  const auto b_count = static_cast<std::size_t>(options.replicates);
  const std::size_t cap = 10 * b_count;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(b_count), static_cast<Eigen::Index>(grid_size));
  std::vector<std::size_t> draws(b_count, 0);

  parallel_for(b_count, options.threads, [&](std::size_t b) {
    for (std::size_t attempt = 0; attempt < cap; ++attempt) {
      const auto idx = resample_indices(n, options.seed, b, attempt);
      try {
        values.row(static_cast<Eigen::Index>(b)) = replicate(idx).transpose();
        draws[b] = attempt + 1;
        return;
      } catch (const DegenerateExposureError&) {
      } catch (const MissingRegionError&) {
      }
    }
    draws[b] = cap;
    throw DegenerateExposureError("bootstrap replicate " + std::to_string(b) +
                                  " stayed degenerate over " + std::to_string(cap) + " redraws");
  });

  std::size_t total = 0;
  for (auto d : draws) total += d;
  if (total > cap) {
    throw DegenerateExposureError("bootstrap needed " + std::to_string(total) +
                                  " draws, more than 10 x B = " + std::to_string(cap));
  }
  total_draws = static_cast<int>(total);
  return values;
}

CIBand make_band(std::span<const Location> grid, const Eigen::VectorXd& point,
                 const Eigen::MatrixXd& replicates, double alpha, bool pivotal) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  const auto g = static_cast<Eigen::Index>(grid.size());
  if (point.size() != g || replicates.cols() != g || replicates.rows() < 1) {
    throw DataError("replicate matrix does not match the grid");
  }
  CIBand band;
  band.grid.assign(grid.begin(), grid.end());
  band.point = point;
  band.lower.resize(g);
  band.upper.resize(g);
  band.level = 1.0 - alpha;
  band.replicates = static_cast<int>(replicates.rows());
  band.draws = band.replicates;
  std::vector<double> column(static_cast<std::size_t>(replicates.rows()));
  for (Eigen::Index j = 0; j < g; ++j) {
    for (Eigen::Index b = 0; b < replicates.rows(); ++b) {
      column[static_cast<std::size_t>(b)] = replicates(b, j);
    }
    std::sort(column.begin(), column.end());
    const double q_lo = empirical_quantile(column, alpha / 2.0);
    const double q_hi = empirical_quantile(column, 1.0 - alpha / 2.0);
    if (pivotal) {
      band.lower[j] = 2.0 * point[j] - q_hi;
      band.upper[j] = 2.0 * point[j] - q_lo;
    } else {
      band.lower[j] = q_lo;
      band.upper[j] = q_hi;
    }
  }
  band.replicate_values = replicates;
  return band;
}

}  // namespace

void BootstrapOptions::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (replicates < 100) throw ConfigError("the bootstrap needs at least 100 replicates");
}

double empirical_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("quantile level must lie in [0, 1]");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

CIBand pivotal_band(std::span<const Location> grid, const Eigen::VectorXd& point,
                    const Eigen::MatrixXd& replicates, double alpha) {
  return make_band(grid, point, replicates, alpha, true);
}

CIBand percentile_band(std::span<const Location> grid, const Eigen::VectorXd& point,
                       const Eigen::MatrixXd& replicates, double alpha) {
  return make_band(grid, point, replicates, alpha, false);
}

std::vector<std::size_t> resample_indices(std::size_t n, std::uint64_t seed, std::uint64_t index,
                                          std::uint64_t attempt) {
  Rng rng(child_seed(seed, index, attempt));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

CIBand bootstrap_band(const Dataset& data, const EffectFitter& fitter,
                      std::span<const Location> grid, const BootstrapOptions& options) {
  options.validate();
  data.validate();
  const EffectModel original = fitter(data);
  const Eigen::VectorXd point = evaluate_effect(original, grid);
  int draws = 0;
  const Eigen::MatrixXd reps = run_replicates(
      data.size(), grid.size(),
      [&](const std::vector<std::size_t>& idx) {
        return evaluate_effect(fitter(data.subset(idx)), grid);
      },
      options, draws);
  CIBand band = pivotal_band(grid, point, reps, options.alpha);
  band.draws = draws;
  return band;
}

CIBand bootstrap_band(const Dataset& data, const BasisSpec& spec, std::span<const Location> grid,
                      const BootstrapOptions& options, const FitOptions& fit_options) {
  FitOptions fo = fit_options;
  fo.spec = spec;
  if (options.refit_nuisance || data.residual_level) {
    return bootstrap_band(
        data, [&](const Dataset& d) { return fit_effect(Method::rosce, d, fo); }, grid, options);
  }

  options.validate();
  data.validate();
  const ResidualFit full = fit_residuals(data, spec, fo.residual);
  const EffectModel original = fit_rosce(full, data.s, spec, fo.solver);
  const Eigen::VectorXd point = evaluate_effect(original, grid);
  int draws = 0;
  const Eigen::MatrixXd reps = run_replicates(
      data.size(), grid.size(),
      [&](const std::vector<std::size_t>& idx) {
        ResidualFit sub = ResidualFit::from_residuals(full.w_hat(idx), full.v_hat(idx));
        sub.exposure_scale = full.exposure_scale;
        std::vector<Location> s;
        s.reserve(idx.size());
        for (auto i : idx) s.push_back(data.s[i]);
        return evaluate_effect(fit_rosce(sub, s, spec, fo.solver), grid);
      },
      options, draws);
  CIBand band = pivotal_band(grid, point, reps, options.alpha);
  band.draws = draws;
  return band;
}

Dispersion mc_dispersion(const SynthConfig& dgp, int n_sims, std::pair<double, double> quantiles,
                         std::span<const Location> grid, std::uint64_t seed,
                         std::span<const Method> methods, const FitOptions& fit_options,
                         int threads) {
  if (n_sims < 1) throw ConfigError("Monte Carlo dispersion needs at least one simulation");
  const auto [q_lo, q_hi] = quantiles;
  if (!(q_lo >= 0.0 && q_lo <= q_hi && q_hi <= 1.0)) {
    throw ConfigError("quantiles must satisfy 0 <= q_lo <= q_hi <= 1");
  }
  if (methods.empty()) throw ConfigError("no estimation method requested");
  dgp.validate();

  // Keep a drawn theta0 fixed across simulations.
  SynthConfig base = dgp;
  if (!base.theta0_seed) base.theta0_seed = base.seed;

  const auto sims = static_cast<std::size_t>(n_sims);
  const auto g = static_cast<Eigen::Index>(grid.size());
  std::vector<Eigen::MatrixXd> estimates(methods.size(),
                                         Eigen::MatrixXd(static_cast<Eigen::Index>(sims), g));
  Eigen::VectorXd truth(g);

  parallel_for(sims, threads, [&](std::size_t j) {
    SynthConfig cfg = base;
    cfg.seed = child_seed(seed, j);
    const SynthOutput out = generate(cfg);
    if (j == 0) {
      for (Eigen::Index k = 0; k < g; ++k) truth[k] = out.truth.tau(grid[static_cast<std::size_t>(k)]);
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const EffectModel model = fit_effect(methods[m], out.data, fit_options);
      estimates[m].row(static_cast<Eigen::Index>(j)) = evaluate_effect(model, grid).transpose();
    }
  });

  Dispersion result;
  result.grid.assign(grid.begin(), grid.end());
  result.quantiles = quantiles;
  result.truth = truth;
  std::vector<double> column(sims);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodDispersion md;
    md.method = methods[m];
    md.q_lo.resize(g);
    md.q_hi.resize(g);
    for (Eigen::Index k = 0; k < g; ++k) {
      for (std::size_t j = 0; j < sims; ++j) column[j] = estimates[m](static_cast<Eigen::Index>(j), k);
      std::sort(column.begin(), column.end());
      md.q_lo[k] = empirical_quantile(column, q_lo);
      md.q_hi[k] = empirical_quantile(column, q_hi);
    }
    md.estimates = std::move(estimates[m]);
    result.methods.push_back(std::move(md));
  }
  return result;
}

}  // namespace rosce
