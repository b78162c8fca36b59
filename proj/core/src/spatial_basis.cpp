#include "rosce/spatial_basis.hpp"

#include <cmath>
#include <sstream>

#include "rosce/error.hpp"

namespace rosce {

double bspline_scalar(double s, double knot_index, double support) {
  if (!(support > 0.0) || !std::isfinite(support)) {
    throw DomainError("B-spline support must be positive and finite");
  }
  const double u = 4.0 * s / support - knot_index;
  if (!(std::abs(u) < 2.0)) return 0.0;
  const double f = u + 2.0;
  // Pieces 3 and 4 are written as the mirror images of pieces 2 and 1 in
  // g = 4 - f, which keeps the right end of the support exactly zero.
  if (f < 1.0) return f * f * f / 6.0;
  if (f < 2.0) return ((-0.5 * f + 2.0) * f - 2.0) * f + 2.0 / 3.0;
  const double g = 4.0 - f;
  if (f < 3.0) return ((-0.5 * g + 2.0) * g - 2.0) * g + 2.0 / 3.0;
  return g * g * g / 6.0;
}

std::vector<double> knot_layout(const Interval& axis, int n_components, double support) {
  if (n_components < 4) {
    throw ConfigError("a cubic B-spline level needs at least 4 components per axis, got " +
                      std::to_string(n_components));
  }
  if (!std::isfinite(axis.lower) || !std::isfinite(axis.upper) || !(axis.lower < axis.upper)) {
    std::ostringstream os;
    os << "knot layout needs a non-empty finite interval, got [" << axis.lower << ", "
       << axis.upper << "]";
    throw ConfigError(os.str());
  }
  if (!(support > 0.0) || !std::isfinite(support)) {
    throw ConfigError("B-spline support must be positive and finite");
  }
  const double cell = axis.width() / n_components;
  if (!(support > cell)) {
    std::ostringstream os;
    os << "support " << support << " does not exceed the component spacing " << cell
       << "; the basis would leave gaps in [" << axis.lower << ", " << axis.upper << "]";
    throw ConfigError(os.str());
  }
  std::vector<double> knots(static_cast<std::size_t>(n_components));
  for (int k = 0; k < n_components; ++k) {
    const double centre = axis.lower + (k + 0.5) * cell;
    knots[static_cast<std::size_t>(k)] = 4.0 * centre / support;
  }
  return knots;
}

BasisLevel BasisLevel::uniform(int n, double fraction, int dims) {
  BasisLevel level;
  level.n_components.assign(static_cast<std::size_t>(dims), n);
  level.support_fraction.assign(static_cast<std::size_t>(dims), fraction);
  return level;
}

BasisSpec BasisSpec::bspline(SpaceDomain domain, std::vector<BasisLevel> levels) {
  if (!domain.is_continuous()) {
    throw ConfigError("B-spline bases need a continuous domain");
  }
  if (levels.empty()) {
    throw ConfigError("a B-spline basis needs at least one level");
  }
  const auto dims = static_cast<std::size_t>(domain.dimension());
  BasisSpec spec(std::move(domain));
  spec.kind_ = Kind::bspline;
  spec.dimension_ = 0;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const auto& level = levels[l];
    if (level.n_components.size() != dims || level.support_fraction.size() != dims) {
      throw ConfigError("basis level " + std::to_string(l + 1) + " must give " +
                        std::to_string(dims) + " component counts and support fractions");
    }
    std::vector<AxisLattice> axes;
    std::size_t size = 1;
    for (std::size_t a = 0; a < dims; ++a) {
      const double fraction = level.support_fraction[a];
      if (!(fraction > 0.0) || !std::isfinite(fraction)) {
        throw ConfigError("basis level " + std::to_string(l + 1) +
                          " has a non-positive support fraction");
      }
      const auto& bounds = spec.domain_.bounds()[a];
      const double support = fraction * bounds.width();
      axes.push_back({knot_layout(bounds, level.n_components[a], support), support});
      size *= static_cast<std::size_t>(level.n_components[a]);
    }
    spec.lattice_.push_back(std::move(axes));
    spec.dimension_ += size;
  }
  spec.levels_ = std::move(levels);
  return spec;
}

BasisSpec BasisSpec::indicator(SpaceDomain domain) {
  if (!domain.is_discrete()) {
    throw ConfigError("indicator bases need a discrete domain");
  }
  BasisSpec spec(std::move(domain));
  spec.kind_ = Kind::indicator;
  spec.dimension_ = static_cast<std::size_t>(spec.domain_.regions());
  return spec;
}

BasisSpec BasisSpec::constant(SpaceDomain domain) {
  BasisSpec spec(std::move(domain));
  spec.kind_ = Kind::constant;
  spec.dimension_ = 1;
  return spec;
}

const std::vector<double>& BasisSpec::knots(std::size_t level, std::size_t axis) const {
  return lattice_.at(level).at(axis).knots;
}

double BasisSpec::support(std::size_t level, std::size_t axis) const {
  return lattice_.at(level).at(axis).support;
}

void eval_basis_into(const BasisSpec& spec, const Location& s, Eigen::Ref<Eigen::VectorXd> out) {
  spec.domain().require_contains(s);
  if (static_cast<std::size_t>(out.size()) != spec.dimension()) {
    throw ConfigError("basis output has the wrong length");
  }
  switch (spec.kind()) {
    case BasisSpec::Kind::constant:
      out[0] = 1.0;
      return;
    case BasisSpec::Kind::indicator:
      out.setZero();
      out[s.region_index() - 1] = 1.0;
      return;
    case BasisSpec::Kind::bspline:
      break;
  }

  Eigen::Index offset = 0;
  std::vector<double> axis_values;
  std::vector<double> block;
  std::vector<double> next;
  for (const auto& level : spec.lattice_) {
    block.assign(1, 1.0);
    for (std::size_t a = 0; a < level.size(); ++a) {
      const auto& lat = level[a];
      axis_values.resize(lat.knots.size());
      for (std::size_t k = 0; k < lat.knots.size(); ++k) {
        axis_values[k] = bspline_scalar(s[static_cast<int>(a)], lat.knots[k], lat.support);
      }
      // Kronecker product, earlier axes vary slowest.
      next.resize(block.size() * axis_values.size());
      std::size_t idx = 0;
      for (double outer : block) {
        for (double inner : axis_values) next[idx++] = outer * inner;
      }
      block.swap(next);
    }
    for (double v : block) out[offset++] = v;
  }
}

BasisVector eval_basis(const BasisSpec& spec, const Location& s) {
  BasisVector out(static_cast<Eigen::Index>(spec.dimension()));
  eval_basis_into(spec, s, out);
  return out;
}

Eigen::MatrixXd basis_matrix(const BasisSpec& spec, std::span<const Location> locations) {
  const auto n = static_cast<Eigen::Index>(locations.size());
  const auto p = static_cast<Eigen::Index>(spec.dimension());
  Eigen::MatrixXd phi(n, p);
  Eigen::VectorXd row(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    eval_basis_into(spec, locations[static_cast<std::size_t>(i)], row);
    phi.row(i) = row.transpose();
  }
  return phi;
}

}  // namespace rosce
