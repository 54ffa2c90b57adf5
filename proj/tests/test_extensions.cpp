#include "doctest.h"
#include "narrowpatch/extensions.hpp"
#include "narrowpatch/oracle.hpp"
#include "narrowpatch/steklov.hpp"
#include "support.hpp"

using namespace narrowpatch;
using namespace narrowpatch::ext;
using testutil::pi;

namespace {

template <class F>
ErrorCode code_of(F f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

InteriorTarget disk_target(Vec2 c, double r, Bc bc = Bc::Dirichlet, double q = 0) {
  InteriorTarget t;
  t.center = c;
  t.size = r;
  t.bc = bc;
  t.q = q;
  return t;
}

// Neumann Green's function of the unit disk with zero mean, written out here
// from the method of images rather than taken from the library.
double disk_bulk_green(Vec2 x, Vec2 xi) {
  double r = xi.norm();
  double img = r > 0 ? norm(x * r - xi * (1 / r)) : 1.0;
  return -(std::log(norm(x - xi)) + std::log(img)) / (2 * pi) + (x.norm2() + xi.norm2()) / (4 * pi) - 3 / (8 * pi);
}
double disk_bulk_regular(Vec2 xi) {
  double r2 = xi.norm2();
  return -std::log(1 - r2) / (2 * pi) + r2 / (2 * pi) - 3 / (8 * pi);
}

}  // namespace

TEST_CASE("C function of a disk target") {
  CHECK(c_exterior_disk(2) == doctest::Approx(0.5));
  CHECK(c_exterior_disk(-0.1) == doctest::Approx(-10));
  CHECK(code_of([] { c_exterior_disk(0); }) == ErrorCode::Pole);
}

TEST_CASE("target nu") {
  auto t = disk_target({0, 0}, 0.05);
  CHECK(target_nu(t) == doctest::Approx(-1 / std::log(0.05)));
  t.shape = TargetShape::Custom;
  t.capacity = 0.5;
  CHECK(target_nu(t) == doctest::Approx(-1 / std::log(0.025)));
  auto r = disk_target({0, 0}, 0.05, Bc::Robin, 4);
  CHECK(target_nu(r) == doctest::Approx(1 / (-std::log(0.05) + 1 / 0.2)));
  r.shape = TargetShape::Custom;
  CHECK(code_of([&] { target_nu(r); }) == ErrorCode::Unsupported);
}

TEST_CASE("library bulk Green of the disk matches the image form") {
  Domain d = Domain::unit_disk();
  for (auto [x, xi] : {std::pair{Vec2{0.1, 0.2}, Vec2{-0.4, 0.3}}, std::pair{Vec2{0.7, 0}, Vec2{0, -0.6}}}) {
    CHECK(greens::bulk_green(d, x, xi) == doctest::Approx(disk_bulk_green(x, xi)).epsilon(1e-12));
    CHECK(greens::bulk_regular_part(d, xi) == doctest::Approx(disk_bulk_regular(xi)).epsilon(1e-12));
  }
}

TEST_CASE("interior splitting: symmetric pair") {
  Domain d = Domain::unit_disk();
  std::vector<InteriorTarget> ts{disk_target({-0.4, 0.1}, 0.03), disk_target({0.4, -0.1}, 0.03)};
  auto sol = interior_splitting(d, ts, 0);
  CHECK(sol.chi == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.A.sum() == doctest::Approx(0).scale(1).epsilon(1e-12));
  // the field takes the value 1 on the own target to leading order
  double on = sol.eval({-0.4 + 0.03, 0.1});
  CHECK(on == doctest::Approx(1).epsilon(0.05));
}

TEST_CASE("interior splitting: larger target captures more") {
  Domain d = Domain::unit_disk();
  double prev = 0;
  for (double r : {0.01, 0.02, 0.04, 0.08}) {
    std::vector<InteriorTarget> ts{disk_target({-0.3, 0.2}, r), disk_target({0.35, -0.1}, 0.03)};
    double chi = interior_splitting(d, ts, 0).chi;
    CHECK(chi > prev);
    prev = chi;
  }
}

TEST_CASE("interior splitting: capacity enters through eps d") {
  Domain d = Domain::ellipse(1.5, 1.0);
  auto a = disk_target({-0.5, 0.2}, 0.04);
  a.shape = TargetShape::Custom;
  a.capacity = 0.5;
  auto same = disk_target({-0.5, 0.2}, 0.02);
  auto other = disk_target({0.6, -0.1}, 0.03);
  CHECK(interior_splitting(d, {a, other}, 0).chi ==
        doctest::Approx(interior_splitting(d, {same, other}, 0).chi).epsilon(1e-12));
}

TEST_CASE("interior splitting against the multi-circle oracle") {
  Domain d = Domain::unit_disk();
  std::vector<InteriorTarget> ts{disk_target({-0.45, 0.1}, 0.04), disk_target({0.3, 0.25}, 0.02)};
  double chi = interior_splitting(d, ts, 0).chi;
  std::vector<oracle::Circle> holes{{{-0.45, 0.1}, 0.04}, {{0.3, 0.25}, 0.02}};
  double ref = oracle::collocation_circles_splitting(holes, 0);
  CHECK(std::abs(chi - ref) < 5e-3);
}

TEST_CASE("interior targets: clearance") {
  Domain d = Domain::unit_disk();
  auto w = check_targets(d, {disk_target({0.85, 0}, 0.02), disk_target({-0.3, 0}, 0.02)});
  REQUIRE(w.size() == 1);
  CHECK(w[0].find("target 0") != std::string::npos);
  CHECK(code_of([&] { check_targets(d, {disk_target({0.97, 0}, 0.02)}); }) == ErrorCode::Domain);
  CHECK(code_of([&] { check_targets(Domain::disk_exterior(), {disk_target({2, 0}, 0.02)}); }) ==
        ErrorCode::Unsupported);
}

TEST_CASE("interior splitting: argument errors") {
  Domain d = Domain::unit_disk();
  CHECK(code_of([&] { interior_splitting(d, {}, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] {
          interior_splitting(d, {disk_target({0.2, 0}, 0.02, Bc::Steklov), disk_target({-0.2, 0}, 0.02)}, 0);
        }) == ErrorCode::InvalidArgument);
  // eps = 0.3 gives nu = 0.83
  CHECK(code_of([&] {
          interior_splitting(d, {disk_target({0.0, 0.3}, 0.3), disk_target({0, -0.55}, 0.01)}, 0);
        }) == ErrorCode::Inadmissible);
}

TEST_CASE("interior SND principal eigenvalue") {
  Domain d = Domain::unit_disk();
  Vec2 x1{-0.3, 0.1}, x2{0.4, -0.2};
  double e1 = 0.02, e2 = 0.03;
  auto r = interior_snd_principal(d, disk_target(x1, e1, Bc::Steklov), disk_target(x2, e2));
  double s = disk_bulk_regular(x1) + disk_bulk_regular(x2) - 2 * disk_bulk_green(x1, x2);
  double C = std::log(e1 * e2) - 2 * pi * s;
  CHECK(r.C == doctest::Approx(C).epsilon(1e-12));
  CHECK(r.sigma0 == doctest::Approx(1 / (e1 * -C)).epsilon(1e-12));
  CHECK(r.warnings.empty());
}

TEST_CASE("interior SND: shrinking Dirichlet target lowers the eigenvalue") {
  Domain d = Domain::unit_disk();
  double prev = 1e300;
  for (double e2 : {0.05, 1e-2, 1e-4, 1e-8}) {
    auto r = interior_snd_principal(d, disk_target({-0.3, 0}, 0.02, Bc::Steklov), disk_target({0.3, 0}, e2));
    CHECK(r.sigma0 < prev);
    CHECK(r.sigma0 > 0);
    prev = r.sigma0;
  }
  // eps1 sigma0 ln(1/eps2) -> 1 as eps2 -> 0
  CHECK(prev * 0.02 * -std::log(1e-8) == doctest::Approx(1).epsilon(0.2));
}

TEST_CASE("interior SND against the multi-circle oracle") {
  Domain d = Domain::unit_disk();
  auto r = interior_snd_principal(d, disk_target({-0.4, 0}, 0.05, Bc::Steklov), disk_target({0.4, 0}, 0.05));
  std::vector<oracle::Circle> holes{{{-0.4, 0}, 0.05, Bc::Steklov}, {{0.4, 0}, 0.05, Bc::Dirichlet}};
  double ref = oracle::collocation_circles_steklov(holes);
  CHECK(r.sigma0 == doctest::Approx(ref).epsilon(0.02));
}

TEST_CASE("interior SND: argument errors") {
  Domain d = Domain::unit_disk();
  auto st = disk_target({-0.3, 0}, 0.02, Bc::Steklov);
  auto di = disk_target({0.3, 0}, 0.02);
  CHECK(code_of([&] { interior_snd_principal(d, di, st); }) == ErrorCode::InvalidArgument);
  auto cu = st;
  cu.shape = TargetShape::Custom;
  cu.capacity = 0.7;
  CHECK(code_of([&] { interior_snd_principal(d, cu, di); }) == ErrorCode::Unsupported);
}

TEST_CASE("exterior scenes") {
  Scene s;
  s.domain = Domain::disk_exterior();
  s.patches = {{0.0, 0.05, Bc::Dirichlet, 0}, {2.0, 0.1, Bc::Dirichlet, 0}};
  auto gm = exterior_scene_support(s);
  REQUIRE(gm.G.rows() == 2);
  CHECK(gm.G(0, 1) == doctest::Approx(gm.G(1, 0)).epsilon(1e-12));
  Scene in = s;
  in.domain = Domain::unit_disk();
  CHECK(code_of([&] { exterior_scene_support(in); }) == ErrorCode::InvalidArgument);

  // the splitting field tends to chi far away
  auto sol = capture::solve_splitting(s, 0);
  double far = sol.eval({300, 200});
  CHECK(far == doctest::Approx(sol.chi).epsilon(1e-3));
  CHECK(sol.chi > 0);
  CHECK(sol.chi < 0.5);

  Scene e = s;
  e.domain = Domain::ellipse_exterior(1.4, 0.8);
  auto se = capture::solve_splitting(e, 1);
  CHECK(se.eval({400, -100}) == doctest::Approx(se.chi).epsilon(1e-3));
}
