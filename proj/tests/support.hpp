#pragma once
// Helpers shared by the test binaries.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "narrowpatch/core.hpp"

namespace testutil {

using std::numbers::pi;

// Area integral of f over the domain d (interior kinds), in polar coordinates
// about the point c, which may lie on the boundary. The radial substitution
// rho = rho_max s^2 tames the log singularity at c.
template <class F>
double area_integral_about(const narrowpatch::Domain& d, narrowpatch::Vec2 c, F f) {
  using boost::math::quadrature::gauss;
  double ia = 1 / (d.a * d.a), ib = 1 / (d.b * d.b);
  double C0 = c.x * c.x * ia + c.y * c.y * ib - 1;
  auto rho_max = [&](double phi) {
    double dx = std::cos(phi), dy = std::sin(phi);
    double A = dx * dx * ia + dy * dy * ib, B = c.x * dx * ia + c.y * dy * ib;
    double disc = std::max(B * B - A * C0, 0.0);
    return std::max((-B + std::sqrt(disc)) / A, 0.0);
  };
  double phi0 = 0, span = 2 * pi;
  if (C0 > -1e-12) {
    // boundary point: inward half-plane of directions
    double nphi = std::atan2(c.y * ib, c.x * ia);
    phi0 = nphi + pi / 2;
    span = pi;
  }
  auto radial = [&](double phi) {
    double R = rho_max(phi);
    if (R <= 0) return 0.0;
    narrowpatch::Vec2 e{std::cos(phi), std::sin(phi)};
    auto g = [&](double s) {
      double rho = R * s * s;
      return f(c + rho * e) * rho * 2 * R * s;
    };
    return gauss<double, 30>::integrate(g, 0.0, 0.5) + gauss<double, 30>::integrate(g, 0.5, 1.0);
  };
  // split the angular range so the boundary kink in rho_max(phi) is resolved
  double total = 0;
  const int pieces = 16;
  for (int p = 0; p < pieces; ++p) {
    double lo = phi0 + span * p / pieces, hi = phi0 + span * (p + 1) / pieces;
    total += gauss<double, 30>::integrate(radial, lo, hi);
  }
  return total;
}

}  // namespace testutil
