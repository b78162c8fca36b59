#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rosce/space.hpp"

namespace rosce {

/// Observations (y_i, z_i, s_i), i = 1..n.
///
/// When `residual_level` is set, y and z already hold the residuals
/// w_hat and v_hat and no nuisance fit is needed before effect estimation.
struct Dataset {
  SpaceDomain domain = SpaceDomain::discrete(1);
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  std::vector<Location> s;
  bool residual_level = false;

  std::size_t size() const noexcept { return s.size(); }

  /// Throws DataError for mismatched lengths, n < 2 or non-finite values and
  /// DomainError for out-of-domain locations.
  void validate() const;

  /// Rows picked by `indices` (duplicates allowed).
  Dataset subset(std::span<const std::size_t> indices) const;
};

}  // namespace rosce
