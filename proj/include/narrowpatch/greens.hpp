#pragma once
// Neumann Green's functions and regular parts for the disk and ellipse,
// interior and exterior, with the source on the boundary (surface) or
// inside the domain (bulk).

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "narrowpatch/core.hpp"

namespace narrowpatch::greens {

enum class GreenMode { Surface, Bulk };

struct Elliptic {
  double alpha, theta;
};

// Ellipse constants; a_E = sqrt(a^2 - b^2), beta = (a-b)/(a+b), alpha_b = atanh(b/a).
struct EllipseConst {
  double a, b, aE, beta, alpha_b;
  explicit EllipseConst(const Domain& d);
  Elliptic coords(Vec2 x) const;
  // metric factor |dx/d(alpha,theta)| = a_E sqrt(sinh^2 alpha + sin^2 theta)
  double metric(double alpha, double theta) const;
};

// G(x, xi) with xi = domain.point(t0) on the boundary; log singularity -(1/pi) ln|x - xi|.
double surface_green(const Domain& d, Vec2 x, double t0);
// R(xi) for xi = domain.point(t0).
double regular_part(const Domain& d, double t0);

// G_b(x, xi) with xi in the domain; log singularity -(1/2pi) ln|x - xi|.
double bulk_green(const Domain& d, Vec2 x, Vec2 xi);
double bulk_regular_part(const Domain& d, Vec2 xi);

struct GreenMatrix {
  GreenMode mode = GreenMode::Surface;
  double scale = 0;    // pi for surface sources, 2 pi for bulk sources
  Eigen::MatrixXd G;   // G(j,i) = scale * G(x_j, x_i), diagonal scale * R(x_j)
  std::vector<std::string> warnings;
};

// Surface matrix for boundary centers t. Optional half-lengths enable the
// separation warning (arc separation below 4 max eps).
GreenMatrix green_matrix(const Domain& d, const std::vector<double>& centers,
                         const std::vector<double>& half_lengths = {});
GreenMatrix bulk_green_matrix(const Domain& d, const std::vector<Vec2>& centers);

}  // namespace narrowpatch::greens
