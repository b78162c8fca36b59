#include "rosce/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rosce/error.hpp"
#include "rosce/rng.hpp"

namespace rosce {
namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

constexpr std::uint64_t kTheta0Stream = 0x7468657461300000ULL;

Eigen::VectorXd standard_normals(Rng& rng, Eigen::Index count) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out(count);
  for (Eigen::Index i = 0; i < count; ++i) out[i] = normal(rng);
  return out;
}

bool is_continuous_dim(const SpaceDomain& d, int dim) {
  return d.is_continuous() && d.dimension() == dim;
}

std::vector<Location> draw_locations(const SynthConfig& cfg, Rng& rng) {
  std::vector<Location> s;
  s.reserve(cfg.n);
  const auto& dom = cfg.domain;
  if (cfg.sampling == Sampling::grid) {
    const auto& b = dom.bounds()[0];
    for (std::size_t i = 0; i < cfg.n; ++i) {
      const double t = cfg.n == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(cfg.n - 1);
      s.push_back(Location{i + 1 == cfg.n && cfg.n > 1 ? b.upper : b.lower + t * b.width()});
    }
    return s;
  }
  if (dom.is_discrete()) {
    std::uniform_int_distribution<int> region(1, dom.regions());
    for (std::size_t i = 0; i < cfg.n; ++i) s.push_back(Location::region(region(rng)));
    return s;
  }
  std::vector<std::uniform_real_distribution<double>> axes;
  for (const auto& b : dom.bounds()) axes.emplace_back(b.lower, b.upper);
  std::array<double, kMaxSpatialDim> c{};
  for (std::size_t i = 0; i < cfg.n; ++i) {
    for (std::size_t a = 0; a < axes.size(); ++a) c[a] = axes[a](rng);
    s.emplace_back(std::span<const double>(c.data(), axes.size()));
  }
  return s;
}

}  // namespace

void SynthConfig::validate() const {
  if (n < 1) throw ConfigError("synthetic sample size must be at least 1");
  if (!(noise_sd_y >= 0.0) || !(noise_sd_z >= 0.0) || !(v_tilde_sd >= 0.0)) {
    throw ConfigError("noise standard deviations must be non-negative");
  }
  if (sampling == Sampling::grid && !is_continuous_dim(domain, 1)) {
    throw ConfigError("grid sampling is only defined on a 1-D continuous domain");
  }
  std::visit(Overloaded{
                 [](const effect::Zero&) {},
                 [&](const effect::Cosine1d& e) {
                   if (!is_continuous_dim(domain, 1) || !(e.period > 0.0)) {
                     throw ConfigError("cosine_1d effect needs a 1-D domain and positive period");
                   }
                 },
                 [&](const effect::Cosine2d& e) {
                   if (!is_continuous_dim(domain, 2) || !(e.period > 0.0)) {
                     throw ConfigError("cosine_2d effect needs a 2-D domain and positive period");
                   }
                 },
                 [&](const effect::CosineRegions&) {
                   if (!domain.is_discrete()) {
                     throw ConfigError("regional cosine effect needs a discrete domain");
                   }
                 },
                 [&](const effect::Parametric& e) {
                   if (!(e.spec.domain() == domain)) {
                     throw ConfigError("parametric effect basis does not match the domain");
                   }
                   if (e.theta0.size() != 0 &&
                       static_cast<std::size_t>(e.theta0.size()) != e.spec.dimension()) {
                     throw ConfigError("theta0 length does not match the effect basis");
                   }
                 },
             },
             effect);
  std::visit(Overloaded{
                 [](const nuisance::None&) {},
                 [&](const nuisance::GpMatern& g) {
                   if (!domain.is_continuous()) {
                     throw ConfigError("GP confounder needs a continuous domain");
                   }
                   g.kernel.validate();
                 },
                 [&](const nuisance::BsplineRandom& b) {
                   if (!(b.spec.domain() == domain) || !(b.scale >= 0.0)) {
                     throw ConfigError("B-spline nuisance basis must match the domain");
                   }
                 },
                 [&](const nuisance::LinearRegion&) {
                   if (!domain.is_discrete()) {
                     throw ConfigError("regional linear nuisance needs a discrete domain");
                   }
                 },
             },
             nuisance);
}

double Truth::tau(const Location& s) const {
  domain.require_contains(s);
  return std::visit(
      Overloaded{
          [](const effect::Zero&) { return 0.0; },
          [&](const effect::Cosine1d& e) {
            return std::cos(2.0 * std::numbers::pi * (s[0] - domain.bounds()[0].lower) / e.period);
          },
          [&](const effect::Cosine2d& e) {
            return std::cos(2.0 * std::numbers::pi * s[0] / e.period +
                            2.0 * std::numbers::pi * s[1] / e.period);
          },
          [&](const effect::CosineRegions&) {
            return std::cos(2.0 * std::numbers::pi * s.region_index() / (2.0 * domain.regions()));
          },
          [&](const effect::Parametric& e) { return eval_basis(e.spec, s).dot(e.theta0); },
      },
      effect);
}

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(config.n);
  Rng rng(config.seed);

  SynthOutput out;
  out.data.domain = config.domain;
  out.data.s = draw_locations(config, rng);
  const auto& s = out.data.s;

  Truth& truth = out.truth;
  truth.domain = config.domain;
  truth.effect = config.effect;
  if (auto* p = std::get_if<effect::Parametric>(&truth.effect); p && p->theta0.size() == 0) {
    Rng theta_rng(child_seed(config.theta0_seed.value_or(config.seed), kTheta0Stream));
    p->theta0 = standard_normals(theta_rng, static_cast<Eigen::Index>(p->spec.dimension()));
  }

  Eigen::VectorXd tau(n);
  for (Eigen::Index i = 0; i < n; ++i) tau[i] = truth.tau(s[static_cast<std::size_t>(i)]);

  if (config.residual_level) {
    const Eigen::VectorXd v_hat = config.noise_sd_z * standard_normals(rng, n);
    truth.v_tilde = config.v_tilde_sd * standard_normals(rng, n);
    truth.eps_y = config.noise_sd_y * standard_normals(rng, n);
    truth.eps_z = Eigen::VectorXd::Zero(n);
    truth.beta = Eigen::VectorXd::Zero(n);
    truth.exposure_mean = Eigen::VectorXd::Zero(n);
    out.data.y = tau.cwiseProduct(v_hat + truth.v_tilde) + truth.eps_y;
    out.data.z = v_hat;
    out.data.residual_level = true;
    return out;
  }

  truth.beta = std::visit(
      Overloaded{
          [&](const nuisance::None&) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(n); },
          [&](const nuisance::GpMatern& g) -> Eigen::VectorXd {
            const Eigen::VectorXd draws = standard_normals(rng, n);
            if (g.kernel.variance + g.kernel.noise == 0.0) return Eigen::VectorXd::Zero(n);
            const Eigen::MatrixXd chol = cholesky_with_jitter(g.kernel.gram(s));
            return chol.triangularView<Eigen::Lower>() * draws;
          },
          [&](const nuisance::BsplineRandom& b) -> Eigen::VectorXd {
            truth.eta = b.scale * standard_normals(rng, static_cast<Eigen::Index>(b.spec.dimension()));
            return basis_matrix(b.spec, s) * truth.eta;
          },
          [&](const nuisance::LinearRegion& l) -> Eigen::VectorXd {
            Eigen::VectorXd beta(n);
            for (Eigen::Index i = 0; i < n; ++i) {
              beta[i] = l.intercept + l.slope * s[static_cast<std::size_t>(i)].region_index();
            }
            return beta;
          },
      },
      config.nuisance);

  truth.exposure_mean = config.link.nuisance_coef * truth.beta + config.link.effect_coef * tau;
  truth.eps_z = config.noise_sd_z * standard_normals(rng, n);
  truth.eps_y = config.noise_sd_y * standard_normals(rng, n);
  out.data.z = truth.exposure_mean + truth.eps_z;
  out.data.y = tau.cwiseProduct(out.data.z) + truth.beta + truth.eps_y;
  return out;
}

SynthConfig gp_example_config(GpCase which, std::size_t n, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.name = which == GpCase::fixed_zero ? "gp-example-fixed-zero" : "gp-example-heterogeneous";
  cfg.domain = SpaceDomain::continuous({{0.0, 10.0}});
  if (which == GpCase::fixed_zero) {
    cfg.effect = effect::Zero{};
  } else {
    cfg.effect = effect::Cosine1d{10.0};
  }
  cfg.nuisance = nuisance::GpMatern{MaternKernel::defaults_for(cfg.domain)};
  cfg.link = {1.0, 0.0};
  cfg.noise_sd_y = 0.0;
  cfg.noise_sd_z = 1.0;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

SynthOutput gen_gp_example(GpCase which, std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("the GP example needs n >= 2");
  return generate(gp_example_config(which, n, seed));
}

SynthConfig experiment_2d_config(std::size_t n, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.name = "2d";
  cfg.domain = SpaceDomain::continuous({{0.0, 10.0}, {0.0, 10.0}});
  cfg.effect = effect::Cosine2d{20.0};
  cfg.nuisance = nuisance::BsplineRandom{
      BasisSpec::bspline(cfg.domain, {BasisLevel::uniform(10, 0.2, 2)}), 1.0};
  cfg.link = {0.5, 0.0};
  cfg.noise_sd_y = 0.2;
  cfg.noise_sd_z = 1.0;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

SynthOutput gen_2d_experiment(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ConfigError("the 2-D experiment needs n >= 2");
  return generate(experiment_2d_config(n, seed));
}

SynthConfig discrete_experiment_config(std::size_t n, int d, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.name = "discrete-" + std::to_string(d);
  cfg.domain = SpaceDomain::discrete(d);
  cfg.effect = effect::CosineRegions{};
  cfg.nuisance = nuisance::LinearRegion{2.0, -1.0};
  cfg.link = {0.0, 1.0};
  cfg.noise_sd_y = 0.2;
  cfg.noise_sd_z = 1.0;
  cfg.n = n;
  cfg.seed = seed;
  return cfg;
}

SynthOutput gen_discrete_experiment(std::size_t n, int d, std::uint64_t seed) {
  if (d < 1 || n < static_cast<std::size_t>(d)) {
    throw ConfigError("the discrete experiment needs n >= d >= 1");
  }
  return generate(discrete_experiment_config(n, d, seed));
}

BasisSpec eiv_basis(int d_theta) {
  if (d_theta < 4) throw ConfigError("the errors-in-variables basis needs d_theta >= 4");
  return BasisSpec::bspline(SpaceDomain::continuous({{0.0, 10.0}}),
                            {BasisLevel::uniform(d_theta, 2.0 / d_theta, 1)});
}

SynthConfig eiv_experiment_config(std::size_t n, int d_theta, std::uint64_t seed,
                                  std::optional<std::uint64_t> theta0_seed) {
  SynthConfig cfg;
  cfg.name = "eiv";
  const BasisSpec spec = eiv_basis(d_theta);
  cfg.domain = spec.domain();
  cfg.effect = effect::Parametric{spec, {}};
  cfg.nuisance = nuisance::None{};
  cfg.noise_sd_y = 0.0;
  cfg.noise_sd_z = 1.0;
  cfg.v_tilde_sd = 1.0;
  cfg.residual_level = true;
  cfg.sampling = Sampling::grid;
  cfg.n = n;
  cfg.seed = seed;
  cfg.theta0_seed = theta0_seed;
  return cfg;
}

SynthOutput gen_eiv_experiment(std::size_t n, int d_theta, std::uint64_t seed,
                               std::optional<std::uint64_t> theta0_seed) {
  if (n < 2) throw ConfigError("the errors-in-variables experiment needs n >= 2");
  return generate(eiv_experiment_config(n, d_theta, seed, theta0_seed));
}

BasisSpec multiresolution_basis_2d(const SpaceDomain& domain) {
  return BasisSpec::bspline(domain, {BasisLevel::uniform(10, 0.2, domain.dimension()),
                                     BasisLevel::uniform(10, 0.4, domain.dimension()),
                                     BasisLevel::uniform(10, 0.85, domain.dimension())});
}

}  // namespace rosce
