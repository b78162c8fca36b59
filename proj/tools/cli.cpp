#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "rosce/bootstrap.hpp"
#include "rosce/csv.hpp"
#include "rosce/error.hpp"
#include "rosce/estimator.hpp"
#include "rosce/serialize.hpp"
#include "rosce/synth.hpp"
#include "rosce/version.hpp"

namespace rosce::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kSynthNames{"gp-example", "2d", "discrete-5", "eiv"};

struct Loaded {
  Dataset data;
  std::optional<Truth> truth;
  std::optional<SynthConfig> dgp;
  BasisSpec default_spec = BasisSpec::constant(SpaceDomain::discrete(1));
};

struct Standardization {
  double y_mean = 0.0, y_sd = 1.0, z_mean = 0.0, z_sd = 1.0;
};

BasisSpec default_basis(const SpaceDomain& domain) {
  if (domain.is_discrete()) return BasisSpec::indicator(domain);
  switch (domain.dimension()) {
    case 1:
      return BasisSpec::bspline(domain, {BasisLevel::uniform(10, 0.2, 1)});
    case 2:
      return multiresolution_basis_2d(domain);
    default:
      return BasisSpec::bspline(domain, {BasisLevel::uniform(6, 0.4, domain.dimension())});
  }
}

SynthConfig synth_config(const RunConfig& cfg) {
  const std::string& name = *cfg.synth;
  if (name == "gp-example") {
    GpCase which;
    if (cfg.synth_case == "fixed-zero") {
      which = GpCase::fixed_zero;
    } else if (cfg.synth_case == "heterogeneous") {
      which = GpCase::heterogeneous;
    } else {
      throw ConfigError("unknown case '" + cfg.synth_case + "' (fixed-zero, heterogeneous)");
    }
    return gp_example_config(which, cfg.n.value_or(300), cfg.seed);
  }
  if (name == "2d") return experiment_2d_config(cfg.n.value_or(676), cfg.seed);
  if (name == "discrete-5") return discrete_experiment_config(cfg.n.value_or(500), 5, cfg.seed);
  if (name == "eiv") return eiv_experiment_config(cfg.n.value_or(41), 10, cfg.seed);
  throw ConfigError("unknown synthetic dataset '" + name + "' (gp-example, 2d, discrete-5, eiv)");
}

BasisSpec synth_basis(const std::string& name, const SpaceDomain& domain) {
  if (name == "eiv") return eiv_basis(10);
  return default_basis(domain);
}

Loaded load(const RunConfig& cfg) {
  Loaded l;
  if (cfg.synth) {
    auto dgp = synth_config(cfg);
    auto out = generate(dgp);
    l.data = std::move(out.data);
    l.truth = std::move(out.truth);
    l.default_spec = synth_basis(*cfg.synth, l.data.domain);
    l.dgp = std::move(dgp);
  } else {
    l.data = read_dataset_csv(fs::path(*cfg.input));
    l.default_spec = default_basis(l.data.domain);
  }
  return l;
}

Standardization standardize(Dataset& data) {
  Standardization st;
  const auto n = static_cast<double>(data.size());
  auto moments = [n](const Eigen::VectorXd& v, double& mean, double& sd) {
    mean = v.mean();
    sd = std::sqrt((v.array() - mean).square().sum() / (n - 1.0));
    if (!(sd > 0.0)) throw DataError("cannot standardize a constant column");
  };
  moments(data.y, st.y_mean, st.y_sd);
  moments(data.z, st.z_mean, st.z_sd);
  data.y = (data.y.array() - st.y_mean) / st.y_sd;
  data.z = (data.z.array() - st.z_mean) / st.z_sd;
  return st;
}

std::vector<Location> make_grid(const SpaceDomain& domain, std::span<const Location> sample,
                                int points) {
  std::vector<Location> grid;
  if (domain.is_discrete()) {
    for (int r = 1; r <= domain.regions(); ++r) grid.push_back(Location::region(r));
    return grid;
  }
  const int dims = domain.dimension();
  std::vector<Interval> box;
  for (int a = 0; a < dims; ++a) {
    Interval iv{sample[0][a], sample[0][a]};
    for (const auto& s : sample) {
      iv.lower = std::min(iv.lower, s[a]);
      iv.upper = std::max(iv.upper, s[a]);
    }
    box.push_back(iv);
  }
  auto coord = [&](int a, int i) {
    if (points == 1) return 0.5 * (box[a].lower + box[a].upper);
    return box[a].lower + box[a].width() * static_cast<double>(i) / (points - 1);
  };
  std::vector<int> idx(static_cast<std::size_t>(dims), 0);
  for (;;) {
    std::array<double, kMaxSpatialDim> c{};
    for (int a = 0; a < dims; ++a) c[static_cast<std::size_t>(a)] = coord(a, idx[static_cast<std::size_t>(a)]);
    grid.emplace_back(std::span<const double>(c.data(), static_cast<std::size_t>(dims)));
    int a = dims - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == points) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  return grid;
}

std::vector<Location> domain_grid(const SpaceDomain& domain, int points) {
  if (domain.is_discrete()) return make_grid(domain, {}, points);
  std::vector<Location> corners;
  std::array<double, kMaxSpatialDim> lo{}, hi{};
  for (int a = 0; a < domain.dimension(); ++a) {
    lo[static_cast<std::size_t>(a)] = domain.bounds()[static_cast<std::size_t>(a)].lower;
    hi[static_cast<std::size_t>(a)] = domain.bounds()[static_cast<std::size_t>(a)].upper;
  }
  const auto d = static_cast<std::size_t>(domain.dimension());
  corners.emplace_back(std::span<const double>(lo.data(), d));
  corners.emplace_back(std::span<const double>(hi.data(), d));
  return make_grid(domain, corners, points);
}

FitOptions fit_options(const RunConfig& cfg, const Loaded& l) {
  FitOptions fo;
  fo.spec = cfg.basis ? basis_spec_from_json(*cfg.basis) : l.default_spec;
  if (!(fo.spec.domain() == l.data.domain)) {
    throw ConfigError("basis domain " + fo.spec.domain().describe() + " does not match data domain " +
                      l.data.domain.describe());
  }
  if (cfg.nuisance_basis) fo.residual.nuisance_spec = basis_spec_from_json(*cfg.nuisance_basis);
  fo.residual.cross_fit_folds = cfg.cross_fit_folds;
  return fo;
}

void check_method(Method m, const SpaceDomain& domain, bool residual_level) {
  if (m == Method::naive_region_ls && !domain.is_discrete()) {
    throw ConfigError("naive_region_ls needs discrete (region) data");
  }
  if (m == Method::gls_sre && !domain.is_continuous()) {
    throw ConfigError("gls_sre needs continuous locations");
  }
  if (residual_level && m != Method::rosce && m != Method::residual_ls) {
    throw ConfigError(std::string(to_string(m)) + " cannot run on residual-level data");
  }
}

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> out;
  for (const auto& n : names) out.push_back(parse_method(n));
  return out;
}

void write_json(const fs::path& path, const json& j) {
  write_file_atomic(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

json run_record(const RunConfig& cfg, const Loaded& l, const std::optional<Standardization>& st) {
  json rec{{"config", to_json(cfg)},
           {"version", std::string(kVersion)},
           {"seed", cfg.seed},
           {"data", {{"n", l.data.size()}, {"domain", to_json(l.data.domain)},
                     {"residual_level", l.data.residual_level}}}};
  if (st) {
    rec["standardization"] = {{"y_mean", st->y_mean}, {"y_sd", st->y_sd},
                              {"z_mean", st->z_mean}, {"z_sd", st->z_sd}};
  } else {
    rec["standardization"] = nullptr;
  }
  return rec;
}

int cmd_fit(RunConfig cfg, std::ostream& out) {
  if (!cfg.bootstrap.seed) cfg.bootstrap.seed = cfg.seed;
  cfg.validate();
  Loaded l = load(cfg);
  std::optional<Standardization> st;
  if (cfg.standardize) st = standardize(l.data);

  const Method method = parse_method(cfg.method);
  check_method(method, l.data.domain, l.data.residual_level);
  const FitOptions fo = fit_options(cfg, l);
  const auto grid = make_grid(l.data.domain, l.data.s, cfg.grid_points);

  BootstrapOptions bo;
  bo.replicates = cfg.bootstrap.replicates;
  bo.alpha = cfg.bootstrap.alpha;
  bo.seed = *cfg.bootstrap.seed;
  bo.refit_nuisance = cfg.bootstrap.refit_nuisance;
  bo.validate();

  const EffectModel model = fit_effect(method, l.data, fo);
  const Eigen::VectorXd tau = evaluate_effect(model, grid);
  CIBand band = method == Method::rosce
                    ? bootstrap_band(l.data, fo.spec, grid, bo, fo)
                    : bootstrap_band(
                          l.data, [&](const Dataset& d) { return fit_effect(method, d, fo); }, grid, bo);

  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "effect.csv",
                    [&](std::ostream& o) { write_effect_csv(o, l.data.domain, grid, tau); });
  write_file_atomic(dir / "ci.csv", [&](std::ostream& o) { write_band_csv(o, l.data.domain, band); });
  write_json(dir / "model.json", to_json(model));
  write_json(dir / "run.json", run_record(cfg, l, st));

  json summary{{"command", "fit"},          {"method", std::string(to_string(method))},
               {"n", l.data.size()},         {"d_theta", model.theta.size()},
               {"grid_points", grid.size()}, {"replicates", band.replicates},
               {"draws", band.draws},        {"converged", model.converged},
               {"out", dir.string()}};
  out << summary.dump() << '\n';
  return kOk;
}

int cmd_synth(RunConfig cfg, std::ostream& out) {
  if (!cfg.synth) throw ConfigError("synth needs a dataset name (gp-example, 2d, discrete-5, eiv)");
  cfg.validate();
  const SynthConfig dgp = synth_config(cfg);
  const SynthOutput gen = generate(dgp);
  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "data.csv", [&](std::ostream& o) { write_dataset_csv(o, gen.data); });
  write_file_atomic(dir / "truth.csv",
                    [&](std::ostream& o) { write_truth_csv(o, gen.data, gen.truth); });
  json summary{{"command", "synth"}, {"name", *cfg.synth}, {"n", gen.data.size()},
               {"seed", cfg.seed},   {"residual_level", gen.data.residual_level},
               {"out", dir.string()}};
  out << summary.dump() << '\n';
  return kOk;
}

int cmd_mc(RunConfig cfg, std::ostream& out) {
  if (!cfg.synth) throw ConfigError("mc needs a dataset name (gp-example, 2d, discrete-5, eiv)");
  if (cfg.methods.empty()) cfg.methods = {"rosce", "ls"};
  cfg.validate();
  const SynthConfig dgp = synth_config(cfg);
  const auto methods = parse_methods(cfg.methods);
  for (auto m : methods) check_method(m, dgp.domain, dgp.residual_level);

  Loaded l;
  l.data.domain = dgp.domain;
  l.default_spec = synth_basis(*cfg.synth, dgp.domain);
  const FitOptions fo = fit_options(cfg, l);
  const auto grid = domain_grid(dgp.domain, cfg.grid_points);
  const Dispersion disp =
      mc_dispersion(dgp, cfg.sims, {0.05, 0.95}, grid, cfg.seed, methods, fo);

  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "dispersion.csv",
                    [&](std::ostream& o) { write_dispersion_csv(o, dgp.domain, disp); });
  json rec{{"config", to_json(cfg)}, {"version", std::string(kVersion)}, {"seed", cfg.seed}};
  write_json(dir / "run.json", rec);
  json summary{{"command", "mc"}, {"name", *cfg.synth}, {"sims", cfg.sims},
               {"methods", cfg.methods}, {"grid_points", grid.size()}, {"out", dir.string()}};
  out << summary.dump() << '\n';
  return kOk;
}

int cmd_baselines(RunConfig cfg, std::ostream& out) {
  cfg.validate();
  Loaded l = load(cfg);
  std::optional<Standardization> st;
  if (cfg.standardize) st = standardize(l.data);
  const auto& dom = l.data.domain;
  if (cfg.methods.empty()) {
    if (l.data.residual_level) {
      cfg.methods = {"rosce", "residual_ls"};
    } else if (dom.is_discrete()) {
      cfg.methods = {"rosce", "residual_ls", "direct_ls", "naive_region_ls"};
    } else {
      cfg.methods = {"rosce", "residual_ls", "direct_ls", "gls_sre"};
    }
  }
  const auto methods = parse_methods(cfg.methods);
  for (auto m : methods) check_method(m, dom, l.data.residual_level);
  const FitOptions fo = fit_options(cfg, l);
  const auto grid = make_grid(dom, l.data.s, cfg.grid_points);

  std::vector<Eigen::VectorXd> estimates;
  json models = json::object();
  json rmse = json::object();
  for (auto m : methods) {
    const EffectModel model = fit_effect(m, l.data, fo);
    estimates.push_back(evaluate_effect(model, grid));
    models[std::string(to_string(m))] = to_json(model);
  }
  Eigen::VectorXd truth;
  if (l.truth && !st) {
    truth.resize(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) truth[static_cast<Eigen::Index>(k)] = l.truth->tau(grid[k]);
    for (std::size_t j = 0; j < methods.size(); ++j) {
      rmse[std::string(to_string(methods[j]))] =
          std::sqrt((estimates[j] - truth).squaredNorm() / static_cast<double>(grid.size()));
    }
  }

  const fs::path dir(cfg.out);
  fs::create_directories(dir);
  write_file_atomic(dir / "baselines.csv", [&](std::ostream& o) {
    if (dom.is_discrete()) {
      o << "region";
    } else {
      for (int a = 0; a < dom.dimension(); ++a) o << (a ? "," : "") << 's' << a + 1;
    }
    if (truth.size() > 0) o << ",truth";
    for (auto m : methods) o << ',' << to_string(m);
    o << '\n';
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      if (dom.is_discrete()) {
        o << grid[k].region_index();
      } else {
        for (int a = 0; a < grid[k].dim(); ++a) o << (a ? "," : "") << format_double(grid[k][a]);
      }
      if (truth.size() > 0) o << ',' << format_double(truth[kk]);
      for (const auto& e : estimates) o << ',' << format_double(e[kk]);
      o << '\n';
    }
  });
  write_json(dir / "models.json", models);
  write_json(dir / "run.json", run_record(cfg, l, st));
  json summary{{"command", "baselines"}, {"methods", cfg.methods}, {"n", l.data.size()},
               {"grid_points", grid.size()}, {"out", dir.string()}};
  if (!rmse.empty()) summary["rmse"] = rmse;
  out << summary.dump() << '\n';
  return kOk;
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const DegenerateExposureError& e) {
    err << "error: degenerate exposure: " << e.what() << '\n';
    return kDegenerate;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const MissingRegionError& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const json::exception& e) {
    err << "error: invalid JSON: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

std::optional<json> read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return json::parse(in);
}

}  // namespace

void RunConfig::validate() const {
  static const std::set<std::string> commands{"fit", "synth", "mc", "baselines"};
  if (!commands.contains(command)) throw ConfigError("unknown command '" + command + "'");
  if (command == "fit" || command == "baselines") {
    if (input.has_value() == synth.has_value()) {
      throw ConfigError("give exactly one of --input and --synth");
    }
  }
  if (synth && std::find(kSynthNames.begin(), kSynthNames.end(), *synth) == kSynthNames.end()) {
    throw ConfigError("unknown synthetic dataset '" + *synth + "' (gp-example, 2d, discrete-5, eiv)");
  }
  if (n && *n < 2) throw ConfigError("n must be at least 2");
  if (sims < 1) throw ConfigError("sims must be at least 1");
  if (grid_points < 1) throw ConfigError("grid_points must be at least 1");
  if (cross_fit_folds < 0 || cross_fit_folds == 1) throw ConfigError("cross_fit_folds must be 0 or >= 2");
  parse_method(method);
  parse_methods(methods);
  if (bootstrap.replicates < 100) throw ConfigError("the bootstrap needs at least 100 replicates");
  if (!(bootstrap.alpha > 0.0 && bootstrap.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (basis) basis_spec_from_json(*basis);
  if (nuisance_basis) basis_spec_from_json(*nuisance_basis);
}

nlohmann::json to_json(const RunConfig& c) {
  json j{{"command", c.command},
         {"input", c.input ? json(*c.input) : json(nullptr)},
         {"synth", c.synth ? json(*c.synth) : json(nullptr)},
         {"synth_case", c.synth_case},
         {"n", c.n ? json(*c.n) : json(nullptr)},
         {"seed", c.seed},
         {"method", c.method},
         {"methods", c.methods},
         {"sims", c.sims},
         {"basis", c.basis ? *c.basis : json(nullptr)},
         {"nuisance_basis", c.nuisance_basis ? *c.nuisance_basis : json(nullptr)},
         {"cross_fit_folds", c.cross_fit_folds},
         {"bootstrap",
          {{"replicates", c.bootstrap.replicates},
           {"alpha", c.bootstrap.alpha},
           {"seed", c.bootstrap.seed ? json(*c.bootstrap.seed) : json(nullptr)},
           {"refit_nuisance", c.bootstrap.refit_nuisance}}},
         {"standardize", c.standardize},
         {"grid_points", c.grid_points},
         {"out", c.out}};
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& root) {
  const json& j = root.contains("config") && root.contains("version") ? root.at("config") : root;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> keys{
      "command", "input", "synth", "synth_case", "n", "seed", "method", "methods", "sims", "basis",
      "nuisance_basis", "cross_fit_folds", "bootstrap", "standardize", "grid_points", "out"};
  for (const auto& [k, _] : j.items()) {
    if (!keys.contains(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  RunConfig c;
  auto get = [&](const json& obj, const char* key, auto& field) {
    if (!obj.contains(key) || obj.at(key).is_null()) return;
    try {
      field = obj.at(key).get<std::remove_reference_t<decltype(field)>>();
    } catch (const json::exception&) {
      throw ConfigError(std::string("config key '") + key + "' has the wrong type");
    }
  };
  auto get_opt = [&](const json& obj, const char* key, auto& field) {
    if (!obj.contains(key) || obj.at(key).is_null()) return;
    typename std::remove_reference_t<decltype(field)>::value_type v{};
    get(obj, key, v);
    field = v;
  };
  get(j, "command", c.command);
  get_opt(j, "input", c.input);
  get_opt(j, "synth", c.synth);
  get(j, "synth_case", c.synth_case);
  get_opt(j, "n", c.n);
  get(j, "seed", c.seed);
  get(j, "method", c.method);
  get(j, "methods", c.methods);
  get(j, "sims", c.sims);
  if (j.contains("basis") && !j.at("basis").is_null()) c.basis = j.at("basis");
  if (j.contains("nuisance_basis") && !j.at("nuisance_basis").is_null()) {
    c.nuisance_basis = j.at("nuisance_basis");
  }
  get(j, "cross_fit_folds", c.cross_fit_folds);
  if (j.contains("bootstrap") && !j.at("bootstrap").is_null()) {
    const json& b = j.at("bootstrap");
    if (!b.is_object()) throw ConfigError("config key 'bootstrap' must be an object");
    static const std::set<std::string> bkeys{"replicates", "alpha", "seed", "refit_nuisance"};
    for (const auto& [k, _] : b.items()) {
      if (!bkeys.contains(k)) throw ConfigError("unknown config key 'bootstrap." + k + "'");
    }
    get(b, "replicates", c.bootstrap.replicates);
    get(b, "alpha", c.bootstrap.alpha);
    get_opt(b, "seed", c.bootstrap.seed);
    get(b, "refit_nuisance", c.bootstrap.refit_nuisance);
  }
  get(j, "standardize", c.standardize);
  get(j, "grid_points", c.grid_points);
  get(j, "out", c.out);
  return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatially varying causal effects under unmeasured spatial confounding", "rosce"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // Flag storage; applied over the config file only when given.
  std::string config_path, input, synth, synth_case, method, methods, out_dir, refit;
  std::size_t n = 0;
  std::uint64_t seed = 0, boot_seed = 0;
  int replicates = 0, sims = 0, grid_points = 0, folds = 0;
  double alpha = 0.0;
  bool standardize_flag = false;

  struct Opts {
    CLI::Option *config = nullptr, *input = nullptr, *synth = nullptr, *synth_case = nullptr,
                *n = nullptr, *seed = nullptr, *boot_seed = nullptr, *method = nullptr,
                *methods = nullptr, *replicates = nullptr, *alpha = nullptr, *refit = nullptr,
                *standardize = nullptr, *out = nullptr, *sims = nullptr, *grid = nullptr,
                *folds = nullptr;
  };
  std::map<std::string, Opts> opts;

  auto common = [&](CLI::App* sub, Opts& o) {
    o.config = sub->add_option("--config", config_path, "JSON config (or a run.json); flags override it");
    o.seed = sub->add_option("--seed", seed, "master seed");
    o.out = sub->add_option("--out", out_dir, "output directory");
    o.n = sub->add_option("--n", n, "synthetic sample size");
    o.synth_case = sub->add_option("--case", synth_case, "gp-example case: fixed-zero or heterogeneous");
    o.grid = sub->add_option("--grid-points", grid_points, "query points per axis (continuous data)");
    o.folds = sub->add_option("--cross-fit", folds, "cross-fitting folds for the nuisance fit (0 = off)");
  };

  auto* fit = app.add_subcommand("fit", "estimate the effect with a bootstrap band");
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic dataset and its truth");
  auto* mc = app.add_subcommand("mc", "Monte Carlo dispersion of estimators");
  auto* base = app.add_subcommand("baselines", "point estimates of several methods");
  for (auto* sub : {fit, synth_cmd, mc, base}) common(sub, opts[sub->get_name()]);

  for (auto* sub : {fit, base}) {
    auto& o = opts[sub->get_name()];
    o.input = sub->add_option("--input", input, "dataset CSV");
    o.synth = sub->add_option("--synth", synth, "synthetic dataset: gp-example, 2d, discrete-5, eiv");
    o.standardize = sub->add_flag("--standardize", standardize_flag, "z-score y and z");
  }
  {
    auto& o = opts["fit"];
    o.method = fit->add_option("--method", method, "rosce, direct_ls, naive_region_ls, gls_sre, ls");
    o.replicates = fit->add_option("--B", replicates, "bootstrap replicates");
    o.alpha = fit->add_option("--alpha", alpha, "band level is 1 - alpha");
    o.boot_seed = fit->add_option("--bootstrap-seed", boot_seed, "bootstrap seed (default: --seed)");
    o.refit = fit->add_option("--refit-nuisance", refit, "refit the nuisance per replicate (true/false)")
                  ->check(CLI::IsMember({"true", "false"}));
  }
  for (auto* sub : {synth_cmd, mc}) {
    opts[sub->get_name()].synth = sub->add_option("name", synth, "gp-example, 2d, discrete-5, eiv")->required();
  }
  opts["mc"].sims = mc->add_option("--sims", sims, "number of simulations");
  for (auto* sub : {mc, base}) {
    opts[sub->get_name()].methods = sub->add_option("--methods", methods, "comma-separated methods");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const Opts& o = opts[chosen->get_name()];

  return guarded(err, [&]() -> int {
    RunConfig cfg;
    if (o.config && o.config->count()) cfg = run_config_from_json(*read_json_file(config_path));
    cfg.command = chosen->get_name();
    auto given = [](CLI::Option* opt) { return opt != nullptr && opt->count() > 0; };
    if (given(o.input)) {
      cfg.input = input;
      cfg.synth.reset();
    }
    if (given(o.synth)) {
      cfg.synth = synth;
      if (cfg.command != "synth" && cfg.command != "mc") cfg.input.reset();
    }
    if (given(o.synth_case)) cfg.synth_case = synth_case;
    if (given(o.n)) cfg.n = n;
    if (given(o.seed)) cfg.seed = seed;
    if (given(o.method)) cfg.method = method;
    if (given(o.methods)) {
      cfg.methods.clear();
      std::stringstream ss(methods);
      for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) cfg.methods.push_back(item);
      }
    }
    if (given(o.sims)) cfg.sims = sims;
    if (given(o.replicates)) cfg.bootstrap.replicates = replicates;
    if (given(o.alpha)) cfg.bootstrap.alpha = alpha;
    if (given(o.boot_seed)) cfg.bootstrap.seed = boot_seed;
    if (given(o.refit)) cfg.bootstrap.refit_nuisance = refit == "true";
    if (given(o.standardize)) cfg.standardize = standardize_flag;
    if (given(o.out)) cfg.out = out_dir;
    if (given(o.grid)) cfg.grid_points = grid_points;
    if (given(o.folds)) cfg.cross_fit_folds = folds;

    if (cfg.command == "fit") return cmd_fit(cfg, out);
    if (cfg.command == "synth") return cmd_synth(cfg, out);
    if (cfg.command == "mc") return cmd_mc(cfg, out);
    return cmd_baselines(cfg, out);
  });
}

}  // namespace rosce::cli
