#include <random>

#include "doctest.h"
#include "narrowpatch/greens.hpp"
#include "support.hpp"

using namespace narrowpatch;
using namespace narrowpatch::greens;
using testutil::pi;

namespace {

// Neumann function of the unit disk with boundary source at angle t0, summed
// from its Fourier series: (1/pi) sum r^n cos(n(t - t0))/n + r^2/(4 pi) - 1/(8 pi).
double disk_green_series(Vec2 x, double t0) {
  double r = norm(x), t = std::atan2(x.y, x.x), s = 0, rn = 1;
  for (int n = 1; n < 4000; ++n) {
    rn *= r;
    if (rn < 1e-18) break;
    s += rn * std::cos(n * (t - t0)) / n;
  }
  return s / pi + r * r / (4 * pi) - 1 / (8 * pi);
}

std::vector<Domain> all_kinds() {
  return {Domain::unit_disk(), Domain::disk_exterior(), Domain::ellipse(2, 1), Domain::ellipse_exterior(2, 1)};
}

// Limit of G(x, xi) + (1/pi) ln|x - xi| along the inward (or outward) normal, by
// Richardson extrapolation of two step sizes.
double regular_limit(const Domain& d, double t0) {
  Vec2 xi = d.point(t0);
  Vec2 n{d.b * std::cos(t0), d.a * std::sin(t0)};
  n = (1 / norm(n)) * n;
  if (d.interior()) n = -1.0 * n;
  auto f = [&](double h) { return surface_green(d, xi + h * n, t0) + std::log(h) / pi; };
  double h = 1e-4;
  return 2 * f(h / 2) - f(h);
}

}  // namespace

TEST_CASE("disk surface Green values") {
  Domain d = Domain::unit_disk();
  CHECK(surface_green(d, {0, 0}, 0) == doctest::Approx(-1 / (8 * pi)).epsilon(1e-14));
  CHECK(regular_part(d, 0.7) == doctest::Approx(1 / (8 * pi)));
  CHECK(regular_part(Domain::disk_exterior(), -2.1) == 0);
  CHECK(bulk_regular_part(d, {0, 0}) == doctest::Approx(-3 / (8 * pi)).epsilon(1e-14));
}

TEST_CASE("disk surface Green matches its Fourier series") {
  Domain d = Domain::unit_disk();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 50; ++i) {
    double r = 0.95 * std::sqrt(U(rng)), t = 2 * pi * U(rng), t0 = 2 * pi * U(rng) - pi;
    Vec2 x{r * std::cos(t), r * std::sin(t)};
    CHECK(surface_green(d, x, t0) == doctest::Approx(disk_green_series(x, t0)).epsilon(1e-11));
  }
}

TEST_CASE("surface Green symmetry, all kinds") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-pi, pi);
  for (const auto& d : all_kinds()) {
    for (int i = 0; i < 100; ++i) {
      double t1 = U(rng), t2 = U(rng);
      if (d.arc_distance(t1, t2) < 1e-3) continue;
      double g12 = surface_green(d, d.point(t1), t2), g21 = surface_green(d, d.point(t2), t1);
      CHECK(std::abs(g12 - g21) < 1e-10);
    }
  }
}

TEST_CASE("bulk Green symmetry") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-0.8, 0.8);
  Domain e = Domain::ellipse(2, 1);
  for (int i = 0; i < 50; ++i) {
    Vec2 x{U(rng), 0.5 * U(rng)}, y{2 * U(rng), U(rng)};
    if (!e.contains(y) || e.boundary_distance(y) < 1e-3) continue;
    CHECK(std::abs(bulk_green(e, x, y) - bulk_green(e, y, x)) < 1e-10);
    CHECK(std::abs(bulk_green(Domain::unit_disk(), x, {0.5 * y.x, 0.5 * y.y}) -
                   bulk_green(Domain::unit_disk(), {0.5 * y.x, 0.5 * y.y}, x)) < 1e-10);
  }
}

TEST_CASE("zero mean over the domain") {
  Domain e = Domain::ellipse(2, 1);
  Vec2 xi{0.4, -0.3};
  double m = testutil::area_integral_about(e, xi, [&](Vec2 x) { return bulk_green(e, x, xi); });
  CHECK(std::abs(m) < 1e-6);
  double t0 = 0.9;
  double ms = testutil::area_integral_about(e, e.point(t0), [&](Vec2 x) { return surface_green(e, x, t0); });
  CHECK(std::abs(ms) < 1e-6);
  Domain d = Domain::unit_disk();
  double md = testutil::area_integral_about(d, d.point(-1.2), [&](Vec2 x) { return surface_green(d, x, -1.2); });
  CHECK(std::abs(md) < 1e-6);
  Vec2 c{-0.2, 0.6};
  double mb = testutil::area_integral_about(d, c, [&](Vec2 x) { return bulk_green(d, x, c); });
  CHECK(std::abs(mb) < 1e-6);
}

TEST_CASE("regular part is the limit of G plus the log singularity") {
  for (const auto& d : all_kinds())
    for (double t0 : {0.0, 0.6, 1.7, -2.4}) {
      CAPTURE(domain_kind_name(d.kind));
      CAPTURE(t0);
      CHECK(regular_limit(d, t0) == doctest::Approx(regular_part(d, t0)).epsilon(1e-5));
    }
}

TEST_CASE("bulk regular part is the limit of G_b plus the log singularity") {
  Domain e = Domain::ellipse(2, 1);
  for (Vec2 xi : {Vec2{0, 0}, Vec2{0.9, 0.3}, Vec2{-1.2, -0.1}}) {
    auto f = [&](double h) { return bulk_green(e, xi + Vec2{h * 0.6, h * 0.8}, xi) + std::log(h) / (2 * pi); };
    double lim = 2 * f(5e-5) - f(1e-4);
    CHECK(lim == doctest::Approx(bulk_regular_part(e, xi)).epsilon(1e-5));
  }
}

TEST_CASE("exterior far field") {
  for (const auto& d : {Domain::disk_exterior(), Domain::ellipse_exterior(2, 1)})
    for (double R : {1e2, 1e4}) {
      double g = surface_green(d, {R * 0.6, R * 0.8}, 0.3) + std::log(R) / (2 * pi);
      CHECK(std::abs(g) < 20 / R);
    }
}

TEST_CASE("exterior disk: R1 + R2 - 2 G12 equals (2/pi) ln|x1 - x2|") {
  Domain d = Domain::disk_exterior();
  double t1 = 0.3, t2 = 2.2;
  double dist = norm(d.point(t1) - d.point(t2));
  double lhs = regular_part(d, t1) + regular_part(d, t2) - 2 * surface_green(d, d.point(t1), t2);
  CHECK(lhs == doctest::Approx(2 / pi * std::log(dist)).epsilon(1e-12));
  Domain in = Domain::unit_disk();
  double lin = regular_part(in, t1) + regular_part(in, t2) - 2 * surface_green(in, in.point(t1), t2);
  CHECK(lin == doctest::Approx(lhs).epsilon(1e-12));
}

TEST_CASE("ellipse tends to the disk") {
  Domain e{DomainKind::EllipseInterior, 1 + 1e-6, 1};
  Domain d = Domain::unit_disk();
  for (double t0 : {0.0, 1.0, 2.5}) {
    CHECK(std::abs(regular_part(e, t0) - regular_part(d, t0)) < 1e-4);
    for (double t : {0.5, -1.5})
      CHECK(std::abs(surface_green(e, e.point(t0 + t), t0) - surface_green(d, d.point(t0 + t), t0)) < 1e-4);
    Vec2 x{0.3, -0.2};
    CHECK(std::abs(surface_green(e, x, t0) - surface_green(d, x, t0)) < 1e-4);
  }
}

TEST_CASE("green matrix") {
  Domain d = Domain::unit_disk();
  auto gm = green_matrix(d, {0, pi});
  CHECK(gm.scale == pi);
  CHECK(gm.G(0, 0) == doctest::Approx(0.125));
  CHECK(gm.G(0, 1) == doctest::Approx(-std::log(2.0) + 0.125).epsilon(1e-13));
  CHECK(gm.G(1, 0) == gm.G(0, 1));
  auto one = green_matrix(d, {0.4});
  CHECK(one.G.rows() == 1);
  CHECK(one.G(0, 0) == doctest::Approx(0.125));
  auto bm = bulk_green_matrix(d, {{0, 0}, {0.5, 0}});
  CHECK(bm.scale == 2 * pi);
  CHECK(bm.G(0, 0) == doctest::Approx(-0.75));
  CHECK(green_matrix(d, {0, 0.1}, {0.05, 0.05}).warnings.size() == 1);
  CHECK(green_matrix(d, {0, 1}, {0.05, 0.05}).warnings.empty());
}

TEST_CASE("green matrix symmetric on the ellipse") {
  Domain e = Domain::ellipse(3, 1);
  auto gm = green_matrix(e, {0.1, 1.3, 2.9, -1.0, -2.2});
  CHECK((gm.G - gm.G.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(gm.G.allFinite());
}

TEST_CASE("green errors") {
  Domain d = Domain::unit_disk();
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code([&] { surface_green(d, d.point(0.3), 0.3); }) == ErrorCode::Singularity);
  CHECK(code([&] { surface_green(d, {1.5, 0}, 0.3); }) == ErrorCode::Domain);
  CHECK(code([&] { surface_green(Domain::disk_exterior(), {0.5, 0}, 0.3); }) == ErrorCode::Domain);
  CHECK(code([&] { bulk_regular_part(d, {1 - 1e-8, 0}); }) == ErrorCode::Singularity);
  CHECK(code([&] { green_matrix(d, {0.2, 0.2}); }) == ErrorCode::Degenerate);
  CHECK(code([&] { Domain::ellipse(1, 2).validate(); }) == ErrorCode::Domain);
  CHECK(code([&] { Domain::disk_exterior().area(); }) == ErrorCode::Unsupported);
}
