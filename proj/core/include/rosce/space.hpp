#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace rosce {

inline constexpr int kMaxSpatialDim = 3;

/// A point in continuous space (1 to 3 coordinates) or a 1-based region label.
class Location {
 public:
  Location() = default;
  Location(std::initializer_list<double> coords);
  explicit Location(std::span<const double> coords);

  static Location region(int k) { return Location{static_cast<double>(k)}; }

  int dim() const noexcept { return dim_; }
  double operator[](int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
  std::span<const double> coords() const noexcept {
    return {coords_.data(), static_cast<std::size_t>(dim_)};
  }
  /// Region label of a discrete location (value of the single coordinate).
  int region_index() const noexcept { return static_cast<int>(coords_[0]); }

  friend bool operator==(const Location& a, const Location& b) noexcept {
    return a.dim_ == b.dim_ && a.coords_ == b.coords_;
  }

 private:
  std::array<double, kMaxSpatialDim> coords_{};
  int dim_ = 0;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return x >= lower && x <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Spatial domain S: a box in R^1..R^3, or the region set {1, ..., d}.
class SpaceDomain {
 public:
  enum class Kind { continuous, discrete };

  /// Throws ConfigError unless 1..3 axes, each finite with lower < upper.
  static SpaceDomain continuous(std::vector<Interval> bounds);
  /// Throws ConfigError unless d >= 1.
  static SpaceDomain discrete(int regions);

  Kind kind() const noexcept { return kind_; }
  bool is_continuous() const noexcept { return kind_ == Kind::continuous; }
  bool is_discrete() const noexcept { return kind_ == Kind::discrete; }

  /// Number of coordinates of a location (1 for discrete domains).
  int dimension() const noexcept {
    return is_continuous() ? static_cast<int>(bounds_.size()) : 1;
  }
  int regions() const noexcept { return regions_; }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }

  bool contains(const Location& s) const noexcept;
  /// Throws DomainError when `s` is not in the domain.
  void require_contains(const Location& s) const;

  std::string describe() const;

  friend bool operator==(const SpaceDomain&, const SpaceDomain&) = default;

 private:
  SpaceDomain() = default;

  Kind kind_ = Kind::discrete;
  std::vector<Interval> bounds_;
  int regions_ = 0;
};

std::string to_string(const Location& s);

}  // namespace rosce
