#pragma once
// Canonical half-plane inner problems for a patch scaled to [-1, 1]:
// Dirichlet Green's function, interval Steklov eigenbasis, Robin Green's
// function and its far-field constant C(mu).

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "narrowpatch/core.hpp"

namespace narrowpatch::halfplane {

inline constexpr double kC1Exact = 1.5 - 0.69314718055994530942;  // 3/2 - ln 2
double c2_exact();                                                // (21 - 2 pi^2)/(18 pi)

// Elliptic coordinates with unit focal distance: y = (cosh a cos t, sinh a sin t).
struct HalfPlaneCoords {
  double alpha, theta;
};
HalfPlaneCoords halfplane_coords(Vec2 y);

// Harmonic in y2 > 0, zero on |y1| <= 1, zero flux on |y1| > 1, ~ ln|y| + ln 2 far away.
double g_dirichlet(Vec2 y);

// Eigenpairs of dPsi/dn = mu Psi on |y1| < 1, Psi_k = sum_n c(k,n) cos(n t) e^{-n a}.
// k = 0 is the constant mode mu = 0; even k are symmetric in y1, odd k antisymmetric.
struct SteklovBasis {
  int K = 0, M = 0;
  std::vector<double> mu;
  Eigen::MatrixXd c;  // K x (M + 1)

  double psi_inf(int k) const { return c(k, 0); }
  bool even(int k) const { return k % 2 == 0; }
  // number of even modes with k >= 2
  int even_count() const { return (K - 1) / 2; }
};

inline constexpr int kDefaultK = 101;
inline constexpr int kDefaultM = 400;
inline constexpr std::uint32_t kBasisFormatVersion = 1;

SteklovBasis build_basis(int K = kDefaultK, int M = kDefaultM);
void save_basis(const SteklovBasis& b, const std::string& path);
SteklovBasis load_basis(const std::string& path);
// Uses $NARROWPATCH_CACHE_DIR (or cache_dir) when set, building on a miss.
SteklovBasis cached_basis(int K = kDefaultK, int M = kDefaultM, std::optional<std::string> cache_dir = {});

double psi_eval(const SteklovBasis& b, int k, Vec2 y);
// Psi_k on the interval, y1 in [-1, 1]
double psi_interval(const SteklovBasis& b, int k, double y1);

// Far-field constant of the Robin Green's function.
class CFunction {
 public:
  explicit CFunction(const SteklovBasis& b, bool tail = true, int even_modes = -1);
  double operator()(double mu) const;
  double derivative(double mu) const;
  // mu_{2j}, j = 0..even_modes, with mu_0 = 0
  double pole(int j) const { return poles_.at(j); }
  int even_modes() const { return static_cast<int>(poles_.size()) - 1; }
  bool tail() const { return tail_; }

 private:
  std::vector<double> poles_, weights_;  // weights = Psi_2j(inf)^2
  bool tail_;
};

double g_robin(const SteklovBasis& b, double mu, Vec2 y);

// C_n for n = 1..n_max (series in mu about 0, without the pi/(2 mu) pole).
std::vector<double> taylor_coeffs(const SteklovBasis& b, int n_max, int even_modes = -1, bool tail = false);

}  // namespace narrowpatch::halfplane
