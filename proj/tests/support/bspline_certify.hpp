#pragma once

// Property checks for the scalar cubic B-spline, shared by the unit tests and
// the acceptance gate. Each check returns an empty string on success and a
// description of the first violation otherwise.

#include <array>
#include <cmath>
#include <sstream>
#include <string>

#include "rosce/spatial_basis.hpp"

namespace certify {

struct Cubic {
  // p(t) = a0 + a1 t + a2 t^2 + a3 t^3 around the expansion point.
  double a0, a1, a2, a3;
};

/// Exact cubic through four samples of `f` at x0 + k * h, k = 0..3, expanded
/// around `at`. Used to read off one-sided derivatives of a single piece.
template <class F>
Cubic reconstruct(F f, double x0, double h, double at) {
  std::array<double, 4> x{}, y{};
  for (int k = 0; k < 4; ++k) {
    x[static_cast<std::size_t>(k)] = x0 + k * h;
    y[static_cast<std::size_t>(k)] = f(x[static_cast<std::size_t>(k)]);
  }
  // Newton divided differences.
  std::array<double, 4> d = y;
  for (int j = 1; j < 4; ++j) {
    for (int k = 3; k >= j; --k) {
      d[static_cast<std::size_t>(k)] =
          (d[static_cast<std::size_t>(k)] - d[static_cast<std::size_t>(k - 1)]) /
          (x[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k - j)]);
    }
  }
  // Expand the Newton form around `at`: p(at + t).
  // p = d0 + d1 (u - x0) + d2 (u - x0)(u - x1) + d3 (u - x0)(u - x1)(u - x2), u = at + t.
  const double e0 = at - x[0], e1 = at - x[1], e2 = at - x[2];
  Cubic c{};
  c.a0 = d[0] + d[1] * e0 + d[2] * e0 * e1 + d[3] * e0 * e1 * e2;
  c.a1 = d[1] + d[2] * (e0 + e1) + d[3] * (e0 * e1 + e0 * e2 + e1 * e2);
  c.a2 = d[2] + d[3] * (e0 + e1 + e2);
  c.a3 = d[3];
  return c;
}

/// Full property suite for one (knot index, support) pair.
inline std::string check_component(double c, double support) {
  std::ostringstream why;
  const double unit = support / 4.0;  // s-distance of one unit of f
  auto b = [&](double s) { return rosce::bspline_scalar(s, c, support); };
  auto s_of = [&](double f) { return (f + c - 2.0) * unit; };

  // Reference values.
  if (std::abs(b(c * unit) - 2.0 / 3.0) > 1e-12) {
    why << "centre value " << b(c * unit) << " != 2/3 at c=" << c << " L=" << support;
    return why.str();
  }
  for (double side : {-1.0, 1.0}) {
    const double v = b((c + side) * unit);
    if (std::abs(v - 1.0 / 6.0) > 1e-12) {
      why << "value " << v << " != 1/6 at f=" << 2 + side << " c=" << c << " L=" << support;
      return why.str();
    }
  }

  // Compact support and positivity on a dense grid covering +-3 units.
  const int steps = 6000;
  for (int i = 0; i <= steps; ++i) {
    const double s = (c - 3.0 + 6.0 * i / steps) * unit;
    const double v = b(s);
    const double f = 4.0 * s / support - c;
    if (std::abs(f) >= 2.0) {
      if (v != 0.0) {
        why << "nonzero value " << v << " outside support at s=" << s << " c=" << c << " L=" << support;
        return why.str();
      }
    } else if (!(v > 0.0)) {
      why << "non-positive value " << v << " inside support at s=" << s;
      return why.str();
    }
    const double mirror = b(2.0 * c * unit - s);
    if (std::abs(v - mirror) > 1e-12) {
      why << "asymmetry " << v << " vs " << mirror << " at s=" << s;
      return why.str();
    }
  }

  // C2 at the piece boundaries f = 0..4.
  const double h = 1e-5 * unit;
  for (int k = 0; k <= 4; ++k) {
    const double x = s_of(k);
    // Values: the limit from each side equals the value at the boundary.
    const Cubic left = reconstruct(b, x - 0.4 * unit, 0.1 * unit, x);
    const Cubic right = reconstruct(b, x + 0.1 * unit, 0.1 * unit, x);
    const double scale1 = unit, scale2 = unit * unit;  // derivatives in f units
    if (std::abs(left.a0 - right.a0) > 1e-10 || std::abs(left.a0 - b(x)) > 1e-10) {
      why << "value jump at f=" << k << ": " << left.a0 << " | " << b(x) << " | " << right.a0;
      return why.str();
    }
    // First derivative by second-order one-sided differences with step 1e-5.
    const double d_left = (3.0 * b(x) - 4.0 * b(x - h) + b(x - 2 * h)) / (2.0 * h) * scale1;
    const double d_right = (-3.0 * b(x) + 4.0 * b(x + h) - b(x + 2 * h)) / (2.0 * h) * scale1;
    if (std::abs(d_left - d_right) > 1e-8) {
      why << "first-derivative jump " << d_left << " vs " << d_right << " at f=" << k;
      return why.str();
    }
    if (std::abs(left.a1 * scale1 - right.a1 * scale1) > 1e-8) {
      why << "first-derivative jump (cubic) at f=" << k;
      return why.str();
    }
    // Second derivative from the exact cubic of each adjacent piece.
    if (std::abs(2.0 * left.a2 * scale2 - 2.0 * right.a2 * scale2) > 1e-8) {
      why << "second-derivative jump " << 2 * left.a2 * scale2 << " vs " << 2 * right.a2 * scale2
          << " at f=" << k << " c=" << c << " L=" << support;
      return why.str();
    }
  }
  return {};
}

}  // namespace certify
