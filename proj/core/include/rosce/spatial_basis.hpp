#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rosce/space.hpp"

namespace rosce {

/// phi(s): one entry per basis component.
using BasisVector = Eigen::VectorXd;

/// Cubic B-spline component centred at c*L/4 with support width L.
///
/// Piecewise cubic in f = 4s/L - c + 2 on f in [0, 4], zero elsewhere. The
/// knot index c may be any real number; integer values place the centre on the
/// lattice of quarter supports. Throws DomainError for L <= 0.
double bspline_scalar(double s, double knot_index, double support);

/// Knot indices of `n_components` uniformly spaced components on `axis`.
///
/// Centres sit at the midpoints of `n_components` equal cells of the interval,
/// so the outermost supports extend symmetrically past both bounds. Every
/// point of the closed interval is covered by at least one component with a
/// strictly positive value. Throws ConfigError for n_components < 4, a
/// degenerate interval, a non-positive support, or a support too narrow for
/// the cell width to be covered.
std::vector<double> knot_layout(const Interval& axis, int n_components, double support);

/// One resolution level: per-axis component counts and supports, the latter
/// as fractions of the per-axis range (support = fraction * range).
struct BasisLevel {
  std::vector<int> n_components;
  std::vector<double> support_fraction;

  /// Same count and fraction on each of `dims` axes.
  static BasisLevel uniform(int n, double fraction, int dims);
  friend bool operator==(const BasisLevel&, const BasisLevel&) = default;
};

/// Configuration of the spatial basis phi(s).
///
/// Three kinds:
///  - bspline: tensor-product cubic B-splines, levels stacked in order. For
///    each level the flattened index is axis-1-major, i.e. in 2-D
///    index = k1 * N2 + k2 (and ((k1 * N2) + k2) * N3 + k3 in 3-D).
///  - indicator: one-hot over the regions of a discrete domain.
///  - constant: phi(s) = (1), the fixed-effect model class.
class BasisSpec {
 public:
  enum class Kind { bspline, indicator, constant };

  static BasisSpec bspline(SpaceDomain domain, std::vector<BasisLevel> levels);
  static BasisSpec indicator(SpaceDomain domain);
  static BasisSpec constant(SpaceDomain domain);

  Kind kind() const noexcept { return kind_; }
  const SpaceDomain& domain() const noexcept { return domain_; }
  const std::vector<BasisLevel>& levels() const noexcept { return levels_; }
  /// d_theta.
  std::size_t dimension() const noexcept { return dimension_; }

  /// Knot indices of `level` on `axis` (see knot_layout).
  const std::vector<double>& knots(std::size_t level, std::size_t axis) const;
  /// Support width in native units of `level` on `axis`.
  double support(std::size_t level, std::size_t axis) const;

  friend bool operator==(const BasisSpec& a, const BasisSpec& b) {
    return a.kind_ == b.kind_ && a.domain_ == b.domain_ && a.levels_ == b.levels_;
  }

 private:
  struct AxisLattice {
    std::vector<double> knots;
    double support = 0.0;
  };

  explicit BasisSpec(SpaceDomain domain) : domain_(std::move(domain)) {}

  Kind kind_ = Kind::constant;
  SpaceDomain domain_;
  std::vector<BasisLevel> levels_;
  std::vector<std::vector<AxisLattice>> lattice_;
  std::size_t dimension_ = 0;

  friend BasisVector eval_basis(const BasisSpec&, const Location&);
  friend void eval_basis_into(const BasisSpec&, const Location&, Eigen::Ref<Eigen::VectorXd>);
};

/// phi(s). Throws DomainError when s is outside spec.domain().
BasisVector eval_basis(const BasisSpec& spec, const Location& s);

/// eval_basis writing into a preallocated vector of length spec.dimension().
void eval_basis_into(const BasisSpec& spec, const Location& s, Eigen::Ref<Eigen::VectorXd> out);

/// Row i holds phi(s_i)^T.
Eigen::MatrixXd basis_matrix(const BasisSpec& spec, std::span<const Location> locations);

}  // namespace rosce
