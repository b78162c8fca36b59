#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rosce::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,      ///< bad flags, config, CSV schema or data
  kDegenerate = 3,  ///< exposure without usable variation
  kNumerical = 4,   ///< factorization or convergence failure
};

struct BootstrapConfig {
  int replicates = 1000;
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;  ///< defaults to RunConfig::seed
  bool refit_nuisance = true;
};

/// Resolved settings of one invocation. JSON keys match the field names.
struct RunConfig {
  std::string command = "fit";
  std::optional<std::string> input;
  std::optional<std::string> synth;      ///< gp-example, 2d, discrete-5, eiv
  std::string synth_case = "heterogeneous";  ///< gp-example only
  std::optional<std::size_t> n;          ///< synthetic sample size
  std::uint64_t seed = 0;
  std::string method = "rosce";
  std::vector<std::string> methods;      ///< mc and baselines
  int sims = 100;                        ///< mc
  std::optional<nlohmann::json> basis;
  std::optional<nlohmann::json> nuisance_basis;
  int cross_fit_folds = 0;
  BootstrapConfig bootstrap;
  bool standardize = false;
  int grid_points = 101;
  std::string out = ".";

  /// Throws ConfigError.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Unknown keys raise ConfigError. Also accepts a run.json written by `fit`.
RunConfig run_config_from_json(const nlohmann::json& j);

/// Runs the command line. Writes one JSON summary line to `out` on success and
/// diagnostics to `err`. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rosce::cli
