#include "rosce/dataset.hpp"

#include <cmath>

#include "rosce/error.hpp"

namespace rosce {

void Dataset::validate() const {
  const auto n = s.size();
  if (static_cast<std::size_t>(y.size()) != n || static_cast<std::size_t>(z.size()) != n) {
    throw DataError("dataset columns differ in length: y " + std::to_string(y.size()) + ", z " +
                    std::to_string(z.size()) + ", s " + std::to_string(n));
  }
  if (n < 2) throw DataError("dataset needs at least 2 observations");
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (!std::isfinite(y[idx]) || !std::isfinite(z[idx])) {
      throw DataError("observation " + std::to_string(i + 1) + " has a non-finite value");
    }
    domain.require_contains(s[i]);
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out{domain, Eigen::VectorXd(static_cast<Eigen::Index>(indices.size())),
              Eigen::VectorXd(static_cast<Eigen::Index>(indices.size())), {}, residual_level};
  out.s.reserve(indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(indices[j]);
    out.y[static_cast<Eigen::Index>(j)] = y[i];
    out.z[static_cast<Eigen::Index>(j)] = z[i];
    out.s.push_back(s[indices[j]]);
  }
  return out;
}

}  // namespace rosce
