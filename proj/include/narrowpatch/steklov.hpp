#pragma once
// Mixed Steklov-Neumann spectrum for N Steklov patches and the
// Steklov-Neumann-Dirichlet problem for one Steklov patch among Dirichlet ones.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "narrowpatch/halfplane.hpp"
#include "narrowpatch/scene.hpp"

namespace narrowpatch::steklov {

struct SnSpectrum {
  Eigen::VectorXd sigma;  // sigma_0 = 0, ascending
  Eigen::MatrixXd A;      // column j: coefficient vector of mode j (column 0 is zero)
  Eigen::VectorXd nu, eps;
  std::vector<std::string> warnings;
};

// All patches Steklov, N >= 2. c1 is the first Taylor coefficient of C(mu).
SnSpectrum sn_spectrum(const Scene& s, double c1 = halfplane::kC1Exact);

// Restriction of mode j (>= 1) on patch i, local coordinate y1 in [-1, 1].
std::vector<double> sn_eigenfunction_restriction(const SnSpectrum& sp, int j, int i,
                                                 const halfplane::SteklovBasis& b,
                                                 const std::vector<double>& y1);

// Index of the single Steklov patch; throws unless the layout is one Steklov
// patch plus at least one Dirichlet patch.
int snd_steklov_index(const Scene& s);

double snd_constant(const Scene& s, std::vector<std::string>* warnings = nullptr);

// Roots mu_hat_{2j}, j = 0..J-1, of C(-mu_hat) = C with mu_{2j} < mu_hat < mu_{2j+2}.
std::vector<double> snd_roots(const halfplane::CFunction& cf, double C, int J);

struct SndResult {
  int steklov = 0;
  double eps1 = 0;
  double C = 0;
  double inv_eps_sigma0 = 0;  // 1/(eps1 sigma0)
  double sigma0 = 0;
  std::vector<double> roots;         // mu_hat_{2j}
  std::vector<double> sigma_higher;  // mu_j / eps1, j = 1..
  Eigen::VectorXd A;                 // principal-mode coefficients, max |A| = 1
  std::vector<std::string> warnings;
};

// roots are filled when cf is given, higher modes when b is given (count J each).
SndResult snd_principal(const Scene& s, const halfplane::SteklovBasis* b = nullptr,
                        const halfplane::CFunction* cf = nullptr, int J = 6, double c1 = halfplane::kC1Exact);

// Restriction on the Steklov patch: mode 0 from the spectral sum, mode j >= 1
// as Psi_j/sqrt(eps1). With root_modes, even j whose root mu_hat_j is in r also
// use the spectral sum, evaluated at mu_hat_j.
std::vector<double> snd_eigenfunction_restriction(const SndResult& r, int j, const halfplane::SteklovBasis& b,
                                                  const std::vector<double>& y1, bool root_modes = false);

enum class EquallySpacedMode { Discrete, LargeN, LowOrder };
const char* equally_spaced_mode_name(EquallySpacedMode m);
// Unit disk, one Steklov patch of half-length eps1 = l1 eps / 2 and N - 1
// Dirichlet patches of half-length eps, equally spaced. Returns 1/(eps1 sigma0).
double snd_equally_spaced(int N, double eps, double l1, EquallySpacedMode mode, double a_emp = 1.25,
                          std::vector<std::string>* warnings = nullptr);

// sigma_j ~ mu_j / eps1 for a lone Steklov patch, j = 1..J
std::vector<double> single_patch_eigenvalues(const halfplane::SteklovBasis& b, double eps1, int J);

}  // namespace narrowpatch::steklov
