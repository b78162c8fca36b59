#include "rosce/serialize.hpp"

#include <set>
#include <string>

#include "rosce/error.hpp"

namespace rosce {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + what);
  }
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key)) throw ConfigError(what + " is missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(what + " field '" + key + "' has the wrong type: " + e.what());
  }
}

json to_json_vec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(what + " must be an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::vector<Interval> bounds_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("'bounds' must be a non-empty array");
  std::vector<Interval> out;
  for (const auto& b : j) {
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
      throw ConfigError("each entry of 'bounds' must be [lower, upper]");
    }
    out.push_back({b[0].get<double>(), b[1].get<double>()});
  }
  return out;
}

template <class T>
std::vector<T> per_axis(const json& j, std::size_t dims, const std::string& what) {
  if (j.is_array()) {
    if (j.size() != dims) {
      throw ConfigError(what + " must list one value per axis (" + std::to_string(dims) + ")");
    }
    std::vector<T> out;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(what + " must be numeric");
      out.push_back(v.get<T>());
    }
    return out;
  }
  if (!j.is_number()) throw ConfigError(what + " must be numeric");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
  }
  return std::vector<T>(dims, j.get<T>());
}

json bounds_to_json(const SpaceDomain& d) {
  json b = json::array();
  for (const auto& iv : d.bounds()) b.push_back({iv.lower, iv.upper});
  return b;
}

}  // namespace

nlohmann::json to_json(const SpaceDomain& domain) {
  if (domain.is_discrete()) return {{"kind", "discrete"}, {"d", domain.regions()}};
  return {{"kind", "continuous"}, {"bounds", bounds_to_json(domain)}};
}

nlohmann::json to_json(const BasisSpec& spec) {
  const auto& dom = spec.domain();
  switch (spec.kind()) {
    case BasisSpec::Kind::indicator:
      return {{"kind", "discrete"}, {"d", dom.regions()}};
    case BasisSpec::Kind::constant:
      if (dom.is_discrete()) return {{"kind", "constant"}, {"d", dom.regions()}};
      return {{"kind", "constant"}, {"bounds", bounds_to_json(dom)}};
    case BasisSpec::Kind::bspline:
      break;
  }
  json levels = json::array();
  for (const auto& level : spec.levels()) {
    levels.push_back({{"n_components", level.n_components},
                      {"support_fraction", level.support_fraction}});
  }
  return {{"kind", "continuous"}, {"bounds", bounds_to_json(dom)}, {"levels", levels}};
}

BasisSpec basis_spec_from_json(const nlohmann::json& j) {
  const std::string what = "basis spec";
  if (!j.is_object()) throw ConfigError("basis spec must be a JSON object");
  const auto kind = get_as<std::string>(j, "kind", what);
  if (kind == "discrete") {
    reject_unknown(j, {"kind", "d"}, what);
    return BasisSpec::indicator(SpaceDomain::discrete(get_as<int>(j, "d", what)));
  }
  if (kind == "constant") {
    reject_unknown(j, {"kind", "d", "bounds"}, what);
    if (j.contains("d")) return BasisSpec::constant(SpaceDomain::discrete(get_as<int>(j, "d", what)));
    return BasisSpec::constant(SpaceDomain::continuous(bounds_from_json(j.at("bounds"))));
  }
  if (kind != "continuous") throw ConfigError("unknown basis kind '" + kind + "'");
  reject_unknown(j, {"kind", "bounds", "levels"}, what);
  if (!j.contains("bounds")) throw ConfigError("continuous basis spec is missing 'bounds'");
  auto domain = SpaceDomain::continuous(bounds_from_json(j.at("bounds")));
  const auto dims = static_cast<std::size_t>(domain.dimension());
  if (!j.contains("levels") || !j.at("levels").is_array()) {
    throw ConfigError("continuous basis spec needs a 'levels' array");
  }
  std::vector<BasisLevel> levels;
  for (const auto& lj : j.at("levels")) {
    reject_unknown(lj, {"n_components", "support_fraction"}, "basis level");
    if (!lj.contains("n_components") || !lj.contains("support_fraction")) {
      throw ConfigError("basis level needs 'n_components' and 'support_fraction'");
    }
    levels.push_back({per_axis<int>(lj.at("n_components"), dims, "n_components"),
                      per_axis<double>(lj.at("support_fraction"), dims, "support_fraction")});
  }
  return BasisSpec::bspline(std::move(domain), std::move(levels));
}

nlohmann::json to_json(const EffectModel& model) {
  return {{"method", std::string(to_string(model.method))},
          {"spec", to_json(model.spec)},
          {"theta", to_json_vec(model.theta)},
          {"delta_bounds", to_json_vec(model.delta_bounds)},
          {"dead_coordinates", model.dead_coordinates},
          {"ridge_fallback", model.ridge_fallback},
          {"converged", model.converged}};
}

EffectModel effect_model_from_json(const nlohmann::json& j) {
  const std::string what = "effect model";
  reject_unknown(j, {"method", "spec", "theta", "delta_bounds", "dead_coordinates",
                     "ridge_fallback", "converged"},
                 what);
  EffectModel model;
  model.method = parse_method(get_as<std::string>(j, "method", what));
  if (!j.contains("spec")) throw ConfigError("effect model is missing 'spec'");
  model.spec = basis_spec_from_json(j.at("spec"));
  if (!j.contains("theta")) throw ConfigError("effect model is missing 'theta'");
  model.theta = vec_from_json(j.at("theta"), "theta");
  if (static_cast<std::size_t>(model.theta.size()) != model.spec.dimension()) {
    throw ConfigError("theta length does not match the basis dimension");
  }
  if (j.contains("delta_bounds")) model.delta_bounds = vec_from_json(j.at("delta_bounds"), "delta_bounds");
  if (j.contains("dead_coordinates")) {
    model.dead_coordinates = get_as<std::vector<std::size_t>>(j, "dead_coordinates", what);
  }
  if (j.contains("ridge_fallback")) model.ridge_fallback = get_as<bool>(j, "ridge_fallback", what);
  if (j.contains("converged")) model.converged = get_as<bool>(j, "converged", what);
  return model;
}

nlohmann::json to_json(const Location& s) {
  json a = json::array();
  for (double c : s.coords()) a.push_back(c);
  return a;
}

Location location_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Location{j.get<double>()};
  if (!j.is_array() || j.empty() || j.size() > kMaxSpatialDim) {
    throw ConfigError("a location is a number or an array of 1 to 3 numbers");
  }
  std::vector<double> c;
  for (const auto& v : j) {
    if (!v.is_number()) throw ConfigError("location coordinates must be numeric");
    c.push_back(v.get<double>());
  }
  return Location(std::span<const double>(c));
}

nlohmann::json to_json(const CIBand& band) {
  json grid = json::array();
  for (const auto& s : band.grid) grid.push_back(to_json(s));
  return {{"level", band.level},       {"replicates", band.replicates},
          {"draws", band.draws},       {"grid", grid},
          {"point", to_json_vec(band.point)}, {"lower", to_json_vec(band.lower)},
          {"upper", to_json_vec(band.upper)}};
}

}  // namespace rosce
