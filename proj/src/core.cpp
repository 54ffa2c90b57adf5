#include "narrowpatch/core.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <numbers>

namespace narrowpatch {

using std::numbers::pi;

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Domain: return "domain_error";
    case ErrorCode::Singularity: return "singularity_error";
    case ErrorCode::Degenerate: return "degenerate_matrix";
    case ErrorCode::Numerical: return "numerical_error";
    case ErrorCode::Assembly: return "assembly_error";
    case ErrorCode::Pole: return "pole_error";
    case ErrorCode::Inadmissible: return "inadmissible";
    case ErrorCode::Resonance: return "resonance_error";
    case ErrorCode::Root: return "root_error";
    case ErrorCode::Separation: return "separation_error";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::Schema: return "schema_error";
    case ErrorCode::Overlap: return "overlap_error";
    case ErrorCode::Timeout: return "timeout";
    case ErrorCode::Resolution: return "resolution_error";
    case ErrorCode::Io: return "io_error";
    case ErrorCode::Internal: return "internal_error";
  }
  return "unknown";
}

const char* domain_kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::DiskInterior: return "disk-interior";
    case DomainKind::DiskExterior: return "disk-exterior";
    case DomainKind::EllipseInterior: return "ellipse-interior";
    case DomainKind::EllipseExterior: return "ellipse-exterior";
  }
  return "?";
}

double wrap_angle(double t) {
  double r = std::remainder(t, 2 * pi);
  if (r <= -pi) r += 2 * pi;
  return r;
}

void Domain::validate() const {
  if (is_disk()) {
    if (a != 1 || b != 1) throw Error(ErrorCode::Domain, "disk domains are the unit disk (a = b = 1)");
    return;
  }
  if (!(b > 0) || !(a > b) || !std::isfinite(a))
    throw Error(ErrorCode::Domain, "ellipse requires a > b > 0 (use a disk kind for a = b)");
}

double Domain::area() const {
  if (!interior()) throw Error(ErrorCode::Unsupported, "unsupported: infinite area");
  return pi * a * b;
}

double Domain::speed(double t) const {
  return std::hypot(a * std::sin(t), b * std::cos(t));
}

double Domain::arc_distance(double t1, double t2) const {
  if (is_disk()) return std::abs(wrap_angle(t2 - t1));
  double d = std::fmod(t2 - t1, 2 * pi);
  if (d < 0) d += 2 * pi;
  auto f = [this](double t) { return speed(t); };
  double s = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, t1, t1 + d, 12, 1e-13);
  return std::min(s, perimeter() - s);
}

double Domain::perimeter() const {
  if (is_disk()) return 2 * pi;
  auto f = [this](double t) { return speed(t); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 2 * pi, 12, 1e-14);
}

bool Domain::contains(Vec2 x, double tol) const {
  double q = x.x * x.x / (a * a) + x.y * x.y / (b * b);
  if (interior()) return q <= 1 + tol;
  return q >= 1 - tol;
}

double Domain::boundary_distance(Vec2 x) const {
  if (is_disk()) return std::abs(1 - norm(x));
  const int n = 256;
  int best = 0;
  double bd = 1e300;
  for (int i = 0; i < n; ++i) {
    double d = norm(x - point(2 * pi * i / n));
    if (d < bd) { bd = d; best = i; }
  }
  double h = 2 * pi / n;
  auto f = [&](double t) { return norm(x - point(t)); };
  auto r = boost::math::tools::brent_find_minima(f, (best - 1) * h, (best + 1) * h, 52);
  return std::min(bd, r.second);
}

double Domain::param_of(Vec2 x, double tol) const {
  double t = std::atan2(x.y / b, x.x / a);
  if (norm(point(t) - x) > tol)
    throw Error(ErrorCode::Domain, "point is not on the boundary");
  return t;
}

}  // namespace narrowpatch
