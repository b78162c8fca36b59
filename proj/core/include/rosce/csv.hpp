#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "rosce/bootstrap.hpp"
#include "rosce/dataset.hpp"
#include "rosce/error.hpp"
#include "rosce/synth.hpp"

namespace rosce {

/// A CSV schema violation. `line` and `column` are 1-based; 0 means "not applicable".
class SchemaError : public ConfigError {
 public:
  SchemaError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Shortest text that parses back to the same double.
std::string format_double(double x);

/// Reads a dataset. Accepted headers (any column order):
///   y,z,s1[,s2[,s3]]      continuous locations ("s" is an alias of "s1")
///   y,z,region            1-based integer regions
///   w_hat,v_hat,s1...     residual-level data (also with region)
/// Without `domain` the bounding box of the locations (or 1..max region) is used.
Dataset read_dataset_csv(std::istream& in, const std::optional<SpaceDomain>& domain = std::nullopt);
Dataset read_dataset_csv(const std::filesystem::path& path,
                         const std::optional<SpaceDomain>& domain = std::nullopt);

void write_dataset_csv(std::ostream& out, const Dataset& data);

/// One row per observation: location columns, tau, beta, exposure_mean.
void write_truth_csv(std::ostream& out, const Dataset& data, const Truth& truth);

/// Location columns, then tau_hat.
void write_effect_csv(std::ostream& out, const SpaceDomain& domain, std::span<const Location> grid,
                      const Eigen::VectorXd& tau);

/// Location columns (s1.. or region), then point, lower, upper.
void write_band_csv(std::ostream& out, const SpaceDomain& domain, const CIBand& band);

/// Location columns, truth, then <method>_q_lo, <method>_q_hi per method.
void write_dispersion_csv(std::ostream& out, const SpaceDomain& domain,
                          const Dispersion& dispersion);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace rosce
