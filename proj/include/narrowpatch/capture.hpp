#pragma once
// Splitting probabilities, effective lengths, mean first-reaction time and
// the circulant (equally spaced) machinery.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "narrowpatch/greens.hpp"
#include "narrowpatch/halfplane.hpp"
#include "narrowpatch/scene.hpp"

namespace narrowpatch::capture {

inline constexpr double kNuBound = 0.6;  // admissibility
inline constexpr double kNuWarn = 0.5;

struct NuEff {
  double nu, eps_eff;
};
// cfun is required for Robin patches only.
NuEff nu_and_effective_length(const Patch& p, const halfplane::CFunction* cfun = nullptr);

// M0 = I + (I - nu E / nubar) nu G
Eigen::MatrixXd m0_matrix(const Eigen::MatrixXd& G, const Eigen::VectorXd& nu);

// Sources of an outer expansion: boundary patches (surface Green) or interior
// targets (bulk Green).
struct OuterSources {
  Domain domain;
  greens::GreenMode mode = greens::GreenMode::Surface;
  std::vector<double> t;   // boundary parameters (surface)
  std::vector<Vec2> xy;    // positions (both modes)
  std::vector<double> eps;
  double scale = 0;
  // scale * G(x, x_i)
  double green(Vec2 x, int i) const;
};

struct SplittingSolution {
  int target = 0;  // 0-based
  double chi = 0;
  Eigen::VectorXd A, nu;
  Eigen::MatrixXd G;
  OuterSources src;
  std::vector<std::string> warnings;

  // S_k(x) = chi - sum_i A_i scale G(x, x_i); near_field set when x is within eps_i of a center.
  double eval(Vec2 x, bool cap = false, bool* near_field = nullptr) const;
};

struct MfrtSolution {
  double ubar = 0;
  Eigen::VectorXd A, nu;
  Eigen::MatrixXd G;
  OuterSources src;
  std::vector<std::string> warnings;

  double eval(Vec2 x, bool* near_field = nullptr) const;
};

// Algebra shared with interior targets; G is the scaled Green matrix.
SplittingSolution splitting_from_system(const Eigen::MatrixXd& G, const Eigen::VectorXd& nu, int k);

// k is 0-based. Robin patches need cfun.
SplittingSolution solve_splitting(const Scene& s, int k, const halfplane::CFunction* cfun = nullptr);
MfrtSolution solve_mfrt(const Scene& s, const halfplane::CFunction* cfun = nullptr);

double kappa_exact(int N, int j);
enum class KappaOrder { Full, Cubic, LowOrder, Empirical };
const char* kappa_order_name(KappaOrder o);
double kappa_asymptotic(int N, int j, KappaOrder order, double a_emp = 1.25);
// Si(x) = int_0^x sin(t)/t dt
double sine_integral(double x);

struct CirculantCheck {
  Eigen::VectorXd A_spectral, A_dense;
  double chi_spectral = 0, chi_dense = 0;
  double max_abs_diff = 0;
};
// N identical equally spaced Dirichlet patches on the unit disk, target k (0-based).
CirculantCheck circulant_splitting_check(int N, double eps, int k = 0);

}  // namespace narrowpatch::capture
