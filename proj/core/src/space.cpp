#include "rosce/space.hpp"

#include <cmath>
#include <sstream>

#include "rosce/error.hpp"

namespace rosce {

Location::Location(std::initializer_list<double> coords)
    : Location(std::span<const double>(coords.begin(), coords.size())) {}

Location::Location(std::span<const double> coords) {
  if (coords.empty() || coords.size() > kMaxSpatialDim) {
    throw DomainError("location must have 1 to 3 coordinates, got " +
                      std::to_string(coords.size()));
  }
  dim_ = static_cast<int>(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) coords_[i] = coords[i];
}

SpaceDomain SpaceDomain::continuous(std::vector<Interval> bounds) {
  if (bounds.empty() || bounds.size() > kMaxSpatialDim) {
    throw ConfigError("continuous domain needs 1 to 3 axes, got " +
                      std::to_string(bounds.size()));
  }
  for (std::size_t a = 0; a < bounds.size(); ++a) {
    const auto& b = bounds[a];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper) || !(b.lower < b.upper)) {
      std::ostringstream os;
      os << "axis " << a + 1 << " bounds [" << b.lower << ", " << b.upper
         << "] are not a finite interval with lower < upper";
      throw ConfigError(os.str());
    }
  }
  SpaceDomain d;
  d.kind_ = Kind::continuous;
  d.bounds_ = std::move(bounds);
  return d;
}

SpaceDomain SpaceDomain::discrete(int regions) {
  if (regions < 1) {
    throw ConfigError("discrete domain needs at least one region, got " +
                      std::to_string(regions));
  }
  SpaceDomain d;
  d.kind_ = Kind::discrete;
  d.regions_ = regions;
  return d;
}

bool SpaceDomain::contains(const Location& s) const noexcept {
  if (s.dim() != dimension()) return false;
  if (is_discrete()) {
    const double r = s[0];
    return std::isfinite(r) && r == std::floor(r) && r >= 1.0 && r <= regions_;
  }
  for (int a = 0; a < s.dim(); ++a) {
    if (!bounds_[static_cast<std::size_t>(a)].contains(s[a])) return false;
  }
  return true;
}

void SpaceDomain::require_contains(const Location& s) const {
  if (!contains(s)) {
    throw DomainError("location " + to_string(s) + " is outside " + describe());
  }
}

std::string SpaceDomain::describe() const {
  std::ostringstream os;
  if (is_discrete()) {
    os << "discrete domain {1.." << regions_ << "}";
  } else {
    os << "continuous domain ";
    for (std::size_t a = 0; a < bounds_.size(); ++a) {
      if (a) os << " x ";
      os << '[' << bounds_[a].lower << ", " << bounds_[a].upper << ']';
    }
  }
  return os.str();
}

std::string to_string(const Location& s) {
  std::ostringstream os;
  os << '(';
  for (int a = 0; a < s.dim(); ++a) {
    if (a) os << ", ";
    os << s[a];
  }
  os << ')';
  return os.str();
}

}  // namespace rosce
