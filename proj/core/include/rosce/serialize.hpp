#pragma once

#include <iosfwd>

#include <nlohmann/json.hpp>

#include "rosce/bootstrap.hpp"
#include "rosce/estimator.hpp"
#include "rosce/space.hpp"
#include "rosce/spatial_basis.hpp"

namespace rosce {

// JSON schema of a basis:
//   {"kind": "continuous", "bounds": [[lo, hi], ...],
//    "levels": [{"n_components": 10 | [10, 10], "support_fraction": 0.2 | [0.2, 0.2]}]}
//   {"kind": "discrete", "d": 5}
//   {"kind": "constant", "bounds": [[lo, hi], ...]}   or   {"kind": "constant", "d": 5}
// Unknown keys are rejected with ConfigError.

nlohmann::json to_json(const SpaceDomain& domain);
nlohmann::json to_json(const BasisSpec& spec);
BasisSpec basis_spec_from_json(const nlohmann::json& j);

/// {"method", "spec", "theta", "delta_bounds", "dead_coordinates", "ridge_fallback", "converged"}
nlohmann::json to_json(const EffectModel& model);
EffectModel effect_model_from_json(const nlohmann::json& j);

/// {"level", "replicates", "draws", "grid", "point", "lower", "upper"}
nlohmann::json to_json(const CIBand& band);

nlohmann::json to_json(const Location& s);
Location location_from_json(const nlohmann::json& j);

}  // namespace rosce
