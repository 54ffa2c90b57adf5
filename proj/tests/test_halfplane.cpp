#include <boost/math/quadrature/gauss.hpp>
#include <filesystem>

#include "doctest.h"
#include "narrowpatch/halfplane.hpp"
#include "support.hpp"

using namespace narrowpatch;
using namespace narrowpatch::halfplane;
using testutil::pi;

namespace {

const SteklovBasis& b21() {
  static SteklovBasis b = build_basis(21, 100);
  return b;
}

const SteklovBasis& b101() {
  static SteklovBasis b = build_basis(101, 400);
  return b;
}

// int_{-1}^{1} f(y1) dy1 through y1 = cos t
template <class F>
double interval_integral(F f) {
  using boost::math::quadrature::gauss;
  auto g = [&](double t) { return f(std::cos(t)) * std::sin(t); };
  double s = 0;
  for (int p = 0; p < 8; ++p) s += gauss<double, 30>::integrate(g, pi * p / 8, pi * (p + 1) / 8);
  return s;
}

// d/dy2 at y2 = 0+ of a function vanishing on the interval
template <class F>
double dy2_from_zero(F f, double y1, double h = 1e-5) {
  return (4 * f(Vec2{y1, h}) - f(Vec2{y1, 2 * h})) / (2 * h);
}

double laplacian(double (*f)(Vec2), Vec2 y, double h = 1e-3) {
  return (f({y.x + h, y.y}) + f({y.x - h, y.y}) + f({y.x, y.y + h}) + f({y.x, y.y - h}) - 4 * f(y)) / (h * h);
}

}  // namespace

TEST_CASE("g_dirichlet boundary values and far field") {
  CHECK(g_dirichlet({0.3, 0}) == 0);
  CHECK(g_dirichlet({-1, 0}) == 0);
  CHECK(g_dirichlet({1, 0}) == 0);
  for (double t : {0.2, 1.3, 2.9}) {
    Vec2 y{1e6 * std::cos(t), 1e6 * std::sin(t)};
    CHECK(std::abs(g_dirichlet(y) - std::log(1e6) - std::log(2.0)) < 1e-5);
  }
}

TEST_CASE("g_dirichlet is harmonic with zero flux off the interval") {
  for (Vec2 y : {Vec2{0.1, 0.3}, Vec2{1.5, 0.7}, Vec2{-2, 2}, Vec2{0.99, 0.05}})
    CHECK(std::abs(laplacian(g_dirichlet, y, 1e-3 * std::min(1.0, y.y))) < 1e-3);
  for (double y1 : {1.2, -1.7, 3.0}) {
    double d = (g_dirichlet({y1, 2e-6}) - g_dirichlet({y1, 1e-6})) / 1e-6;
    CHECK(std::abs(d) < 1e-4);
  }
}

TEST_CASE("g_dirichlet flux through the interval is pi") {
  // the flux density is 1/sqrt(1 - y1^2) pointwise
  for (double y1 : {0.0, 0.4, -0.7, 0.95})
    CHECK(dy2_from_zero(g_dirichlet, y1, 1e-7) == doctest::Approx(1 / std::sqrt(1 - y1 * y1)).epsilon(1e-4));
  // Gauss-Chebyshev on the weighted density
  int n = 64;
  double flux = 0;
  for (int i = 0; i < n; ++i) {
    double y1 = std::cos(pi * (i + 0.5) / n);
    flux += pi / n * dy2_from_zero(g_dirichlet, y1, 1e-7) * std::sqrt(1 - y1 * y1);
  }
  CHECK(flux == doctest::Approx(pi).epsilon(1e-5));
}

TEST_CASE("interval Steklov basis table") {
  const auto& b = b21();
  const double mu_odd[] = {2.0061, 5.1253, 8.2600, 11.3982, 14.5378, 17.6780, 20.8187, 23.9596, 27.1006, 30.2418};
  const double mu_even[] = {3.4533, 6.6286, 9.7839, 12.9330, 16.0794, 19.2242, 22.3682, 25.5116, 28.6547, 31.7974};
  const double psi2[] = {0.0664, 0.0391, 0.0279, 0.0218, 0.0178, 0.0151, 0.0131, 0.0116, 0.0104, 0.0094};
  CHECK(b.mu[0] == 0);
  CHECK(b.psi_inf(0) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  for (int k = 1; k <= 10; ++k) {
    CHECK(std::abs(b.mu[2 * k - 1] - mu_odd[k - 1]) < 5e-4);
    CHECK(std::abs(b.mu[2 * k] - mu_even[k - 1]) < 5e-4);
    CHECK(std::abs(b.psi_inf(2 * k) * b.psi_inf(2 * k) - psi2[k - 1]) < 5e-4);
    CHECK(b.psi_inf(2 * k - 1) == 0);
  }
  for (int k = 1; k < b.K; ++k) CHECK(b.mu[k] > b.mu[k - 1]);
}

TEST_CASE("basis orthonormal on the interval with parity") {
  const auto& b = b21();
  for (int j = 0; j < 8; ++j)
    for (int k = j; k < 8; ++k) {
      double g = interval_integral([&](double y) { return psi_interval(b, j, y) * psi_interval(b, k, y); });
      CHECK(std::abs(g - (j == k ? 1.0 : 0.0)) < 1e-8);
    }
  for (int k = 0; k < 8; ++k)
    for (double y : {0.2, 0.55, 0.9}) {
      double s = k % 2 ? -1 : 1;
      CHECK(psi_interval(b, k, -y) == doctest::Approx(s * psi_interval(b, k, y)).epsilon(1e-12));
    }
  double n2 = interval_integral([&](double y) { return std::pow(psi_interval(b, 2, y), 2); });
  CHECK(n2 == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("basis functions satisfy the Steklov and Neumann conditions") {
  const auto& b = b101();
  for (int k : {1, 2, 3, 4}) {
    for (double y1 : {0.1, -0.45, 0.7}) {
      double h = 1e-5;
      double d = (-3 * psi_eval(b, k, {y1, 0}) + 4 * psi_eval(b, k, {y1, h}) - psi_eval(b, k, {y1, 2 * h})) / (2 * h);
      // outward normal is -y2
      CHECK(-d == doctest::Approx(b.mu[k] * psi_interval(b, k, y1)).epsilon(1e-4).scale(1));
    }
    for (double y1 : {1.5, -2.5}) {
      double d = (psi_eval(b, k, {y1, 2e-6}) - psi_eval(b, k, {y1, 1e-6})) / 1e-6;
      CHECK(std::abs(d) < 1e-4);
    }
  }
}

TEST_CASE("psi far field and shape") {
  const auto& b = b21();
  CHECK(psi_eval(b, 0, {3, 4}) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(psi_eval(b, 2, {0, 1e8}) == doctest::Approx(b.psi_inf(2)).epsilon(1e-7));
  // roughly cos(pi y1) up to sign
  double s = psi_interval(b, 2, 0) > 0 ? 1 : -1;
  for (double y : {0.0, 0.3, -0.3})
    CHECK(s * psi_interval(b, 2, y) > 0);
  for (double y : {0.8, -0.8, 0.95})
    CHECK(s * psi_interval(b, 2, y) < 0);
  CHECK_THROWS_AS(psi_eval(b, 21, {0, 1}), Error);
}

TEST_CASE("large-k law") {
  const auto& b = b101();
  for (int k = 10; k < 60; ++k) CHECK(std::abs(b.mu[k] / (pi * k / 2) - 1) < 0.03);
}

TEST_CASE("truncation stability of the basis") {
  auto b1 = build_basis(21, 100), b2 = build_basis(21, 200);
  for (int k = 0; k < 21; ++k) {
    CHECK(std::abs(b1.mu[k] - b2.mu[k]) < 5e-5);
    CHECK(std::abs(b1.psi_inf(k) * b1.psi_inf(k) - b2.psi_inf(k) * b2.psi_inf(k)) < 5e-5);
  }
}

TEST_CASE("C(mu) limits and poles") {
  CFunction C(b101());
  CHECK(std::abs(C(1e6) - std::log(2.0)) < 1e-3);
  CHECK(std::abs(C(0.01) - (pi / 0.02 + kC1Exact)) < 0.01);
  double prev = C(1e-3);
  for (double lm = -2.95; lm <= 6; lm += 0.05) {
    double v = C(std::pow(10.0, lm));
    CHECK(v < prev);
    prev = v;
  }
  try {
    C(-b101().mu[4]);
    FAIL("expected a pole error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Pole);
    CHECK(std::string(e.what()).find("mu_4") != std::string::npos);
  }
  CHECK(C.derivative(0.7) == doctest::Approx((C(0.7 + 1e-6) - C(0.7 - 1e-6)) / 2e-6).epsilon(1e-6));
}

TEST_CASE("C(mu) sweeps from +inf to -inf between poles") {
  CFunction C(b101());
  for (int j = 0; j < 5; ++j) {
    double lo = -C.pole(j + 1), hi = -C.pole(j);
    double w = hi - lo, prev = C(lo + 1e-7 * w);
    CHECK(prev > 1e5);
    for (int i = 1; i < 200; ++i) {
      double v = C(lo + w * i / 200.0);
      CHECK(v < prev);
      prev = v;
    }
    CHECK(C(hi - 1e-7 * w) < -1e5);
  }
}

TEST_CASE("Taylor coefficients") {
  CHECK(kC1Exact == doctest::Approx(0.8069).epsilon(1e-4));
  CHECK(c2_exact() == doctest::Approx(0.0223).epsilon(5e-3));
  auto t10 = taylor_coeffs(b101(), 2, 10, false);
  CHECK(std::abs(t10[0] - 0.7976) < 2e-3);
  CHECK(std::abs(t10[1] - 0.0222) < 5e-4);
  auto t50 = taylor_coeffs(b101(), 2, 50, true);
  CHECK(std::abs(t50[0] - kC1Exact) < 5e-3);
  // more modes move C1 toward the exact value
  double prev = 1;
  for (int m : {5, 10, 20, 40}) {
    double e = std::abs(taylor_coeffs(b101(), 1, m, false)[0] - kC1Exact);
    CHECK(e < prev);
    prev = e;
  }
  // Taylor series reproduces C(mu) - pi/(2 mu) for small mu (same truncation, no tail)
  CFunction C(b101(), false);
  auto tc = taylor_coeffs(b101(), 4, -1, false);
  double mu = 0.05;
  double series = tc[0] - tc[1] * mu + tc[2] * mu * mu - tc[3] * mu * mu * mu;
  CHECK(C(mu) - pi / (2 * mu) == doctest::Approx(series).epsilon(1e-6));
}

TEST_CASE("Robin Green function") {
  const auto& b = b101();
  for (double mu : {0.1, 1.0, 10.0}) {
    CFunction C(b, false);
    double Y = 1e9;
    CHECK(std::abs(g_robin(b, mu, {0, Y}) - std::log(Y) - C(mu)) < 1e-8);
  }
  CHECK(g_robin(b, 1, {0.5, 0}) > 0);
  for (double y1 : {-0.9, -0.5, 0.0, 0.3, 0.8}) CHECK(g_robin(b, -0.5, {y1, 0}) < 0);
  CHECK_THROWS_AS(g_robin(b, -b.mu[2], {0, 1}), Error);
}

TEST_CASE("basis cache round trip") {
  auto dir = std::filesystem::temp_directory_path() / "narrowpatch_test_cache";
  std::filesystem::remove_all(dir);
  auto b = cached_basis(11, 40, dir.string());
  auto b2 = cached_basis(11, 40, dir.string());
  CHECK(b2.mu == b.mu);
  CHECK(b2.c == b.c);
  auto path = (dir / "x.bin").string();
  save_basis(b, path);
  auto b3 = load_basis(path);
  CHECK(b3.K == 11);
  CHECK(b3.M == 40);
  CHECK(b3.c == b.c);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_basis(path), Error);
  CHECK_THROWS_AS(build_basis(30, 40), Error);
}
