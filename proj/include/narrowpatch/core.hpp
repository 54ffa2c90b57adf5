#pragma once
// Shared value types: points, domains, error codes.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace narrowpatch {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain,
  Singularity,
  Degenerate,
  Numerical,
  Assembly,
  Pole,
  Inadmissible,
  Resonance,
  Root,
  Separation,
  Unsupported,
  Schema,
  Overlap,
  Timeout,
  Resolution,
  Io,
  Internal
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct Vec2 {
  double x = 0, y = 0;
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
};
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }

enum class DomainKind { DiskInterior, DiskExterior, EllipseInterior, EllipseExterior };

const char* domain_kind_name(DomainKind k);

// Unit disk (a = b = 1) or ellipse x^2/a^2 + y^2/b^2 = 1 with a > b.
// Boundary points are addressed by the angle t with x = (a cos t, b sin t);
// for an ellipse t is the elliptic angle, for the disk the polar angle.
struct Domain {
  DomainKind kind = DomainKind::DiskInterior;
  double a = 1, b = 1;

  static Domain unit_disk() { return {}; }
  static Domain disk_exterior() { return {DomainKind::DiskExterior, 1, 1}; }
  static Domain ellipse(double a, double b) { return {DomainKind::EllipseInterior, a, b}; }
  static Domain ellipse_exterior(double a, double b) { return {DomainKind::EllipseExterior, a, b}; }

  bool interior() const { return kind == DomainKind::DiskInterior || kind == DomainKind::EllipseInterior; }
  bool is_disk() const { return kind == DomainKind::DiskInterior || kind == DomainKind::DiskExterior; }
  // Throws DomainError unless the shape parameters are usable.
  void validate() const;
  double area() const;  // throws Unsupported for exterior domains
  Vec2 point(double t) const { return {a * std::cos(t), b * std::sin(t)}; }
  // |dx/dt| along the boundary
  double speed(double t) const;
  // Shortest boundary arc length between parameters t1 and t2.
  double arc_distance(double t1, double t2) const;
  // Closure membership with tolerance tol.
  bool contains(Vec2 x, double tol = 1e-9) const;
  // Distance from an interior point to the boundary.
  double boundary_distance(Vec2 x) const;
  // Boundary parameter of a point lying on the boundary (within tol), else DomainError.
  double param_of(Vec2 x, double tol = 1e-6) const;
  double perimeter() const;
};

// Wrap an angle into (-pi, pi].
double wrap_angle(double t);

}  // namespace narrowpatch
