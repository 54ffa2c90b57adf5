#include "narrowpatch/steklov.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <numbers>
#include <sstream>

#include "narrowpatch/capture.hpp"
#include "narrowpatch/greens.hpp"

namespace narrowpatch::steklov {

using std::numbers::pi;

namespace {

Eigen::PartialPivLU<Eigen::MatrixXd> factor_checked(const Eigen::MatrixXd& M, const char* what) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
  if (!(lu.rcond() > 1e-12)) {
    std::ostringstream os;
    os << what << " is numerically singular (rcond " << lu.rcond() << "); patches too large for the asymptotics";
    throw Error(ErrorCode::Inadmissible, os.str());
  }
  return lu;
}

// sum_k Psi_2k(inf) Psi_2k(y) / (mu_2k - s), over the retained even modes
double resolvent_sum(const halfplane::SteklovBasis& b, double s, double y1) {
  double v = 0;
  for (int k = 0; k < b.K; k += 2) {
    double den = b.mu[k] - s;
    if (std::abs(den) < 1e-9) {
      std::ostringstream os;
      os << "eigenvalue resonates with mu_" << k;
      throw Error(ErrorCode::Resonance, os.str());
    }
    v += b.c(k, 0) * halfplane::psi_interval(b, k, y1) / den;
  }
  return v;
}

}  // namespace

SnSpectrum sn_spectrum(const Scene& s, double c1) {
  s.validate();
  const int n = static_cast<int>(s.patches.size());
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "sn_spectrum needs at least two Steklov patches");
  if (!s.targets.empty()) throw Error(ErrorCode::Unsupported, "interior targets are not part of the SN problem");
  SnSpectrum sp;
  sp.nu.resize(n);
  sp.eps.resize(n);
  for (int j = 0; j < n; ++j) {
    if (s.patches[j].bc != Bc::Steklov) throw Error(ErrorCode::InvalidArgument, "sn_spectrum needs Steklov patches only");
    sp.eps(j) = s.patches[j].half_length;
    if (!(sp.eps(j) < 1)) throw Error(ErrorCode::Inadmissible, "Steklov patch half-length must be below 1");
    sp.nu(j) = -1 / std::log(sp.eps(j));
  }
  greens::GreenMatrix gm = greens::green_matrix(s.domain, s.centers(), s.half_lengths());
  sp.warnings = gm.warnings;
  const double nubar = sp.nu.sum();
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd Bh = (I - sp.nu * Eigen::RowVectorXd::Ones(n) / nubar) * sp.nu.asDiagonal();
  Eigen::MatrixXd M1 = I + Bh * (gm.G + c1 * I);
  Eigen::MatrixXd X = factor_checked(M1, "M1").solve(Bh);
  Eigen::VectorXd h = (pi / 2 / sp.eps.array()).sqrt();
  Eigen::MatrixXd D = h.asDiagonal() * X * h.asDiagonal();
  double scale = D.cwiseAbs().maxCoeff();
  double asym = (D - D.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * std::max(1.0, scale)) {
    std::ostringstream os;
    os << "transformed SN matrix is not symmetric (defect " << asym << ")";
    throw Error(ErrorCode::Internal, os.str());
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (D + D.transpose()));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "SN eigensolve failed");
  sp.sigma = es.eigenvalues();
  sp.A = Eigen::MatrixXd::Zero(n, n);
  sp.sigma(0) = 0;
  for (int j = 1; j < n; ++j) {
    if (sp.sigma(j) < -1e-10 * scale) throw Error(ErrorCode::Inadmissible, "negative SN eigenvalue; patches too large");
    sp.sigma(j) = std::max(sp.sigma(j), 0.0);
    Eigen::VectorXd a = es.eigenvectors().col(j).cwiseQuotient(h);
    double s2 = (a.array().square() / sp.eps.array()).sum();
    a *= std::sqrt(2 * sp.sigma(j) * sp.sigma(j) / (pi * pi) / s2);
    int lead = 0;
    a.cwiseAbs().maxCoeff(&lead);
    if (a(0) < 0 || (std::abs(a(0)) < 1e-12 * std::abs(a(lead)) && a(lead) < 0)) a = -a;
    sp.A.col(j) = a;
  }
  double worst = (sp.eps * sp.sigma(n - 1)).maxCoeff();
  if (worst > 0.5) {
    std::ostringstream os;
    os << "max eps_j sigma_{N-1} = " << worst << " exceeds 0.5; C(mu) linearization degrades";
    sp.warnings.push_back(os.str());
  }
  return sp;
}

std::vector<double> sn_eigenfunction_restriction(const SnSpectrum& sp, int j, int i, const halfplane::SteklovBasis& b,
                                                 const std::vector<double>& y1) {
  const int n = static_cast<int>(sp.sigma.size());
  if (j < 1 || j >= n) throw Error(ErrorCode::InvalidArgument, "mode index must be in 1..N-1");
  if (i < 0 || i >= n) throw Error(ErrorCode::InvalidArgument, "patch index out of range");
  const double se = sp.sigma(j) * sp.eps(i);
  std::vector<double> out;
  for (double y : y1) out.push_back(pi * sp.A(i, j) * resolvent_sum(b, se, y));
  return out;
}

int snd_steklov_index(const Scene& s) {
  int idx = -1, dir = 0;
  for (int j = 0; j < static_cast<int>(s.patches.size()); ++j) {
    if (s.patches[j].bc == Bc::Steklov) {
      if (idx >= 0) throw Error(ErrorCode::Unsupported, "SND layouts with several Steklov patches are not covered");
      idx = j;
    } else if (s.patches[j].bc == Bc::Dirichlet) {
      ++dir;
    } else {
      throw Error(ErrorCode::InvalidArgument, "SND layouts admit Steklov and Dirichlet patches only");
    }
  }
  if (idx < 0) throw Error(ErrorCode::InvalidArgument, "SND layout needs one Steklov patch");
  if (dir < 1) throw Error(ErrorCode::InvalidArgument, "SND layout needs N >= 2 (at least one Dirichlet patch)");
  return idx;
}

double snd_constant(const Scene& s, std::vector<std::string>* warnings) {
  s.validate();
  if (!s.targets.empty()) throw Error(ErrorCode::Unsupported, "interior targets are not part of the SND problem");
  const int st = snd_steklov_index(s);
  const int n = static_cast<int>(s.patches.size());
  // reorder so that the Steklov patch comes first
  std::vector<int> order{st};
  for (int j = 0; j < n; ++j)
    if (j != st) order.push_back(j);
  std::vector<double> centers, eps;
  Eigen::VectorXd nu(n);
  for (int r = 0; r < n; ++r) {
    const Patch& p = s.patches[order[r]];
    centers.push_back(p.center);
    eps.push_back(p.half_length);
    nu(r) = r == 0 ? -1 / std::log(p.half_length) : -1 / std::log(p.half_length / 2);
    if (!(nu(r) > 0)) throw Error(ErrorCode::Inadmissible, "patch too large for the logarithmic gauge");
  }
  greens::GreenMatrix gm = greens::green_matrix(s.domain, centers, eps);
  if (warnings) warnings->insert(warnings->end(), gm.warnings.begin(), gm.warnings.end());
  Eigen::MatrixXd M0 = capture::m0_matrix(gm.G, nu);
  Eigen::VectorXd a = -nu / nu.sum();
  a(0) += 1;
  Eigen::VectorXd x = factor_checked(M0, "M0").solve(a);
  double C = -1 / (nu(0) * x(0));
  if (!(C < 0) && warnings) warnings->push_back("SND constant C is not negative; outside the small-target regime");
  return C;
}

std::vector<double> snd_roots(const halfplane::CFunction& cf, double C, int J) {
  if (!std::isfinite(C)) throw Error(ErrorCode::InvalidArgument, "C must be finite");
  if (J < 1 || J > cf.even_modes()) throw Error(ErrorCode::InvalidArgument, "root count exceeds available poles - 1");
  std::vector<double> roots;
  for (int j = 0; j < J; ++j) {
    const double p0 = cf.pole(j), p1 = cf.pole(j + 1);
    // just outside the 1e-9 pole exclusion of C(mu)
    double lo = p0 + 2e-9 * std::max(1.0, p0), hi = p1 - 2e-9 * std::max(1.0, p1);
    auto g = [&](double x) { return cf(-x) - C; };
    double glo = g(lo), ghi = g(hi);
    if (!(glo < 0 && ghi > 0)) {
      std::ostringstream os;
      os << "no sign change of C(-mu) - C on (" << lo << ", " << hi << "): values " << glo << ", " << ghi;
      throw Error(ErrorCode::Root, os.str());
    }
    while (hi - lo > 1e-6) {
      double mid = 0.5 * (lo + hi), gm = g(mid);
      if (gm < 0) { lo = mid; glo = gm; } else { hi = mid; ghi = gm; }
    }
    // secant polish kept inside the bracket
    double x0 = lo, x1 = hi, g0 = glo, g1 = ghi, best = std::abs(glo) < std::abs(ghi) ? lo : hi;
    double gbest = std::min(std::abs(glo), std::abs(ghi));
    for (int it = 0; it < 5 && g1 != g0; ++it) {
      double x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
      if (!(x2 > lo && x2 < hi)) x2 = 0.5 * (lo + hi);
      double g2 = g(x2);
      if (g2 < 0) lo = x2; else hi = x2;
      if (std::abs(g2) < gbest) { gbest = std::abs(g2); best = x2; }
      x0 = x1; g0 = g1; x1 = x2; g1 = g2;
    }
    // fall back to bisection down to double resolution if the residual target is not met
    const double tol = 1e-10 * std::max(1.0, std::abs(C));
    while (gbest > tol && std::nextafter(lo, hi) < hi) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      double gm = g(mid);
      if (std::abs(gm) < gbest) { gbest = std::abs(gm); best = mid; }
      if (gm < 0) lo = mid; else hi = mid;
    }
    roots.push_back(best);
  }
  return roots;
}

SndResult snd_principal(const Scene& s, const halfplane::SteklovBasis* b, const halfplane::CFunction* cf, int J,
                        double c1) {
  SndResult r;
  r.C = snd_constant(s, &r.warnings);
  r.steklov = snd_steklov_index(s);
  r.eps1 = s.patches[r.steklov].half_length;
  r.inv_eps_sigma0 = (2 / pi) * (c1 - r.C);
  if (!(r.inv_eps_sigma0 > 0)) throw Error(ErrorCode::Inadmissible, "principal eigenvalue is not positive");
  r.sigma0 = 1 / (r.eps1 * r.inv_eps_sigma0);
  if (r.eps1 * r.sigma0 > 0.3) {
    std::ostringstream os;
    os << "eps1 sigma0 = " << r.eps1 * r.sigma0 << " exceeds 0.3; linearized C(mu) regime exceeded";
    r.warnings.push_back(os.str());
  }
  // principal-mode coefficients: null vector M0^{-1} (e1 - nu e / nubar), in scene order
  const int n = static_cast<int>(s.patches.size());
  std::vector<double> centers, eps;
  Eigen::VectorXd nu(n);
  for (int j = 0; j < n; ++j) {
    const Patch& p = s.patches[j];
    centers.push_back(p.center);
    eps.push_back(p.half_length);
    nu(j) = j == r.steklov ? -1 / std::log(p.half_length) : -1 / std::log(p.half_length / 2);
  }
  greens::GreenMatrix gm = greens::green_matrix(s.domain, centers, eps);
  Eigen::VectorXd a = -nu / nu.sum();
  a(r.steklov) += 1;
  r.A = capture::m0_matrix(gm.G, nu).partialPivLu().solve(a);
  r.A /= r.A.cwiseAbs().maxCoeff();
  if (r.A(r.steklov) < 0) r.A = -r.A;
  if (cf) r.roots = snd_roots(*cf, r.C, std::min(J, cf->even_modes()));
  if (b) r.sigma_higher = single_patch_eigenvalues(*b, r.eps1, std::min(J, b->K - 1));
  return r;
}

std::vector<double> snd_eigenfunction_restriction(const SndResult& r, int j, const halfplane::SteklovBasis& b,
                                                  const std::vector<double>& y1, bool root_modes) {
  std::vector<double> out;
  if (j < 0) throw Error(ErrorCode::InvalidArgument, "mode index must be non-negative");
  // even modes: spectral sum at eps1 sigma0 (j = 0) or at the root mu_hat_j
  const bool spectral = j == 0 || (root_modes && j % 2 == 0 && j / 2 < static_cast<int>(r.roots.size()));
  if (spectral) {
    const double s = j == 0 ? r.eps1 * r.sigma0 : r.roots[j / 2];
    double norm2 = 0;
    for (int k = 0; k < b.K; k += 2) {
      double den = b.mu[k] - s;
      norm2 += b.c(k, 0) * b.c(k, 0) / (den * den);
    }
    double a0 = -1 / std::sqrt(r.eps1 * norm2);  // V0 > 0 on the patch
    for (double y : y1) out.push_back(a0 * resolvent_sum(b, s, y));
    return out;
  }
  if (j >= b.K) throw Error(ErrorCode::InvalidArgument, "mode index exceeds the basis");
  for (double y : y1) out.push_back(halfplane::psi_interval(b, j, y) / std::sqrt(r.eps1));
  return out;
}

const char* equally_spaced_mode_name(EquallySpacedMode m) {
  switch (m) {
    case EquallySpacedMode::Discrete: return "discrete";
    case EquallySpacedMode::LargeN: return "largeN";
    case EquallySpacedMode::LowOrder: return "loworder";
  }
  return "?";
}

double snd_equally_spaced(int N, double eps, double l1, EquallySpacedMode mode, double a_emp,
                          std::vector<std::string>* warnings) {
  if (N < 2 || !(eps > 0) || !(l1 > 0)) throw Error(ErrorCode::InvalidArgument, "need N >= 2, eps > 0, l1 > 0");
  if (N * eps >= pi) throw Error(ErrorCode::Separation, "N eps >= pi: patches are not well separated");
  const double c1 = halfplane::kC1Exact;
  const double shift = c1 - std::log(l1);  // C1 - ln(2 eps1 / eps)
  const double b = 4 * pi * std::exp(-11.0 / 6.0);
  const double zeta = -std::log(N * eps / b);
  switch (mode) {
    case EquallySpacedMode::Discrete: {
      if (N < 3 && warnings) warnings->push_back("discrete mode is intended for N >= 3");
      double s = 0;
      for (int j = 1; j < N; ++j) s += 1 / (std::log(2 / eps) + capture::kappa_exact(N, j));
      return (2 / pi) * (N / s + shift);
    }
    case EquallySpacedMode::LargeN: {
      if (N < 16 && warnings) warnings->push_back("largeN mode is intended for N >= 16");
      auto f = [&](double xi) { return xi / (1 + 2 * xi * (zeta + a_emp * pi * pi * xi * xi / 9)); };
      double S = 4 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 0.5, 15, 1e-13);
      return (2 / pi) * (1 / S + shift);
    }
    case EquallySpacedMode::LowOrder: {
      if (!(zeta > -1)) throw Error(ErrorCode::Domain, "loworder mode needs zeta > -1");
      double S;
      if (std::abs(zeta) < 1e-4)
        S = 0.5 - zeta / 3 + zeta * zeta / 4;
      else
        S = (zeta - std::log1p(zeta)) / (zeta * zeta);
      return (2 / pi) * (1 / S + shift);
    }
  }
  throw Error(ErrorCode::Internal, "unknown mode");
}

std::vector<double> single_patch_eigenvalues(const halfplane::SteklovBasis& b, double eps1, int J) {
  if (!(eps1 > 0)) throw Error(ErrorCode::InvalidArgument, "eps1 must be positive");
  if (J < 1 || J >= b.K) throw Error(ErrorCode::InvalidArgument, "J must be in 1..K-1");
  std::vector<double> out;
  for (int j = 1; j <= J; ++j) out.push_back(b.mu[j] / eps1);
  return out;
}

}  // namespace narrowpatch::steklov
