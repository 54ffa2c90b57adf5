#include "narrowpatch/capture.hpp"

#include <numbers>
#include <sstream>

namespace narrowpatch::capture {

using std::numbers::pi;

NuEff nu_and_effective_length(const Patch& p, const halfplane::CFunction* cfun) {
  const double e = p.half_length;
  if (!(e > 0)) throw Error(ErrorCode::InvalidArgument, "half_length must be positive");
  switch (p.bc) {
    case Bc::Dirichlet:
      return {-1 / std::log(e / 2), e};
    case Bc::Steklov:
      return {-1 / std::log(e), e};
    case Bc::Robin: {
      if (!cfun) throw Error(ErrorCode::InvalidArgument, "Robin patch needs a C(mu) function");
      if (!(p.q > 0)) throw Error(ErrorCode::InvalidArgument, "Robin reactivity must be positive");
      double c = (*cfun)(e * p.q);
      return {1 / (-std::log(e) + c), e * std::exp(std::log(2.0) - c)};
    }
  }
  throw Error(ErrorCode::Internal, "unknown boundary condition");
}

Eigen::MatrixXd m0_matrix(const Eigen::MatrixXd& G, const Eigen::VectorXd& nu) {
  const int n = static_cast<int>(nu.size());
  const double nubar = nu.sum();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - nu * Eigen::RowVectorXd::Ones(n) / nubar;
  return Eigen::MatrixXd::Identity(n, n) + P * nu.asDiagonal() * G;
}

double OuterSources::green(Vec2 x, int i) const {
  if (mode == greens::GreenMode::Surface) return scale * greens::surface_green(domain, x, t[i]);
  return scale * greens::bulk_green(domain, x, xy[i]);
}

namespace {

Eigen::PartialPivLU<Eigen::MatrixXd> factor_m0(const Eigen::MatrixXd& M0) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(M0);
  double rc = lu.rcond();
  if (!(rc > 1e-12)) {
    std::ostringstream os;
    os << "M0 is numerically singular (rcond " << rc << "); patches too large for the asymptotics";
    throw Error(ErrorCode::Inadmissible, os.str());
  }
  return lu;
}

void check_nu(const Eigen::VectorXd& nu, std::vector<std::string>& warnings) {
  for (int j = 0; j < nu.size(); ++j) {
    std::ostringstream os;
    if (!(nu(j) > 0) || !(nu(j) < kNuBound)) {
      os << "patch " << j << ": nu = " << nu(j) << " outside the admissible range (0, " << kNuBound << ")";
      throw Error(ErrorCode::Inadmissible, os.str());
    }
    if (nu(j) > kNuWarn) {
      os << "patch " << j << ": nu = " << nu(j) << " above " << kNuWarn << "; asymptotic accuracy degrades";
      warnings.push_back(os.str());
    }
  }
}

struct Prepared {
  OuterSources src;
  Eigen::VectorXd nu;
  Eigen::MatrixXd G;
  std::vector<std::string> warnings;
};

Prepared prepare_boundary(const Scene& s, const halfplane::CFunction* cfun) {
  s.validate();
  if (!s.targets.empty()) throw Error(ErrorCode::Unsupported, "mixed boundary and interior targets are not supported");
  const int n = static_cast<int>(s.patches.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "scene has no patches");
  Prepared p;
  p.nu.resize(n);
  for (int j = 0; j < n; ++j) {
    if (s.patches[j].bc == Bc::Steklov)
      throw Error(ErrorCode::InvalidArgument, "Steklov patches belong to the spectral solvers");
    p.nu(j) = nu_and_effective_length(s.patches[j], cfun).nu;
  }
  check_nu(p.nu, p.warnings);
  greens::GreenMatrix gm = greens::green_matrix(s.domain, s.centers(), s.half_lengths());
  p.G = gm.G;
  for (auto& w : gm.warnings) p.warnings.push_back(w);
  p.src.domain = s.domain;
  p.src.mode = greens::GreenMode::Surface;
  p.src.scale = gm.scale;
  p.src.t = s.centers();
  p.src.eps = s.half_lengths();
  for (double t : p.src.t) p.src.xy.push_back(s.domain.point(t));
  return p;
}

double eval_outer(const OuterSources& src, const Eigen::VectorXd& A, double c0, Vec2 x, bool* near_field) {
  if (!src.domain.contains(x)) throw Error(ErrorCode::Domain, "evaluation point lies outside the domain");
  bool near = false;
  double v = c0;
  for (int i = 0; i < A.size(); ++i) {
    if (norm(x - src.xy[i]) < src.eps[i]) near = true;
    v -= A(i) * src.green(x, i);
  }
  if (near_field) *near_field = near;
  return v;
}

}  // namespace

SplittingSolution splitting_from_system(const Eigen::MatrixXd& G, const Eigen::VectorXd& nu, int k) {
  const int n = static_cast<int>(nu.size());
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "target index out of range");
  SplittingSolution sol;
  sol.target = k;
  sol.nu = nu;
  sol.G = G;
  if (n == 1) {
    sol.chi = 1;
    sol.A = Eigen::VectorXd::Zero(1);
    sol.warnings.push_back("single target: splitting probability is 1 trivially");
    return sol;
  }
  const double nubar = nu.sum();
  auto lu = factor_m0(m0_matrix(G, nu));
  Eigen::VectorXd rhs = nu;
  rhs(k) -= nubar;
  rhs *= nu(k) / nubar;
  sol.A = lu.solve(rhs);
  sol.chi = nu.dot(G * sol.A) / nubar + nu(k) / nubar;
  return sol;
}

double SplittingSolution::eval(Vec2 x, bool cap, bool* near_field) const {
  double v = eval_outer(src, A, chi, x, near_field);
  if (cap) v = std::clamp(v, 0.0, 1.0);
  return v;
}

double MfrtSolution::eval(Vec2 x, bool* near_field) const { return eval_outer(src, A, ubar, x, near_field); }

SplittingSolution solve_splitting(const Scene& s, int k, const halfplane::CFunction* cfun) {
  Prepared p = prepare_boundary(s, cfun);
  SplittingSolution sol = splitting_from_system(p.G, p.nu, k);
  sol.src = p.src;
  sol.warnings.insert(sol.warnings.begin(), p.warnings.begin(), p.warnings.end());
  return sol;
}

MfrtSolution solve_mfrt(const Scene& s, const halfplane::CFunction* cfun) {
  if (!s.domain.interior()) throw Error(ErrorCode::Unsupported, "unsupported: infinite area");
  Prepared p = prepare_boundary(s, cfun);
  const double area = s.domain.area();
  const double nubar = p.nu.sum();
  auto lu = factor_m0(m0_matrix(p.G, p.nu));
  MfrtSolution sol;
  sol.nu = p.nu;
  sol.G = p.G;
  sol.src = p.src;
  sol.warnings = p.warnings;
  sol.A = lu.solve((area / (pi * nubar)) * p.nu);
  sol.ubar = area / (pi * nubar) + p.nu.dot(p.G * sol.A) / nubar;
  if (!(sol.ubar > 0)) throw Error(ErrorCode::Inadmissible, "non-positive mean reaction time; patches too large");
  return sol;
}

double kappa_exact(int N, int j) {
  if (N < 2 || j < 1 || j > N) throw Error(ErrorCode::InvalidArgument, "kappa_exact needs N >= 2 and 1 <= j <= N");
  if (j == N) return N / 8.0 - std::log(double(N));
  double s = std::log(2.0);
  for (int m = 1; m < N; ++m) s -= std::cos(2 * pi * double(j) * m / N) * std::log(std::sin(pi * m / N));
  return s;
}

const char* kappa_order_name(KappaOrder o) {
  switch (o) {
    case KappaOrder::Full: return "full";
    case KappaOrder::Cubic: return "cubic";
    case KappaOrder::LowOrder: return "loworder";
    case KappaOrder::Empirical: return "empirical";
  }
  return "?";
}

double sine_integral(double x) {
  // power series; used for |x| <= pi where it converges quickly
  double term = x, s = x, x2 = x * x;
  for (int n = 1; n < 60; ++n) {
    term *= -x2 / ((2.0 * n) * (2.0 * n + 1));
    double add = term / (2.0 * n + 1);
    s += add;
    if (std::abs(add) < 1e-18 * std::abs(s)) break;
  }
  return s;
}

double kappa_asymptotic(int N, int j, KappaOrder order, double a_emp) {
  if (N < 2 || j < 1 || 2 * j > N)
    throw Error(ErrorCode::InvalidArgument, "kappa_asymptotic needs N >= 2 and 1 <= j <= N/2");
  const double n = N, xi = double(j) / N;
  const double low = n / (2.0 * j) + std::log(2 * pi * std::exp(-11.0 / 6.0) / n);
  switch (order) {
    case KappaOrder::Full: {
      double t = 2 * pi * xi;
      double B = std::sin(t) / (pi * xi) - std::cos(t) - (pi * xi / 3) * std::sin(t);
      return n / (2.0 * j) + std::log(pi / n) * B + std::log(2.0) + std::cos(t) / 6 -
             (n / (pi * j)) * sine_integral(t);
    }
    case KappaOrder::Cubic: return low + pi * pi * xi * xi / 9;
    case KappaOrder::LowOrder: return low;
    case KappaOrder::Empirical: return low + a_emp * pi * pi * xi * xi / 9;
  }
  throw Error(ErrorCode::Internal, "unknown kappa order");
}

CirculantCheck circulant_splitting_check(int N, double eps, int k) {
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "circulant check needs N >= 2");
  if (k < 0 || k >= N) throw Error(ErrorCode::InvalidArgument, "target index out of range");
  Scene s;
  for (int i = 0; i < N; ++i) s.patches.push_back({2 * pi * i / N, eps, Bc::Dirichlet, 0});
  SplittingSolution dense = solve_splitting(s, k);
  const double nu = -1 / std::log(eps / 2);
  std::vector<double> kap(N);
  for (int j = 1; j < N; ++j) kap[j] = kappa_exact(N, j);
  CirculantCheck out;
  out.A_dense = dense.A;
  out.chi_dense = dense.chi;
  out.A_spectral.resize(N);
  for (int i = 0; i < N; ++i) {
    double s2 = 0;
    for (int j = 1; j < N; ++j) s2 += std::cos(2 * pi * double(j) * (i - k) / N) / (1 + nu * kap[j]);
    out.A_spectral(i) = -nu * s2 / N;
  }
  // e^T G = kappa_N e^T for the circulant matrix
  out.chi_spectral = 1.0 / N + kappa_exact(N, N) * out.A_spectral.sum() / N;
  out.max_abs_diff = (out.A_spectral - out.A_dense).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace narrowpatch::capture
