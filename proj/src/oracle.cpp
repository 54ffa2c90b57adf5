#include "narrowpatch/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>

namespace narrowpatch::oracle {

using std::numbers::pi;

namespace {

std::vector<double> cheb_nodes(int P) {
  std::vector<double> t(P);
  for (int k = 0; k < P; ++k) t[k] = std::cos((2.0 * k + 1) * pi / (2.0 * P));
  return t;
}

// a = C w: Chebyshev coefficients from values at the first-kind nodes.
Eigen::MatrixXd cheb_transform(int P) {
  Eigen::MatrixXd C(P, P);
  for (int m = 0; m < P; ++m)
    for (int k = 0; k < P; ++k) C(m, k) = (m == 0 ? 1.0 : 2.0) / P * std::cos(m * (2.0 * k + 1) * pi / (2.0 * P));
  return C;
}

// T_0(x) .. T_{P-1}(x)
Eigen::RowVectorXd cheb_row(int P, double x) {
  Eigen::RowVectorXd T(P);
  T(0) = 1;
  if (P > 1) T(1) = x;
  for (int m = 2; m < P; ++m) T(m) = 2 * x * T(m - 1) - T(m - 2);
  return T;
}

double lsinc(double x) { return std::abs(x) < 1e-8 ? -x * x / 6 : std::log(std::sin(x) / x); }

bool rcond_ok(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu, double floor) { return lu.rcond() > floor; }

void require_disk(const Scene& s) {
  if (s.domain.kind != DomainKind::DiskInterior)
    throw Error(ErrorCode::Unsupported, "the reference solvers handle the unit disk interior only");
  s.validate();
}

}  // namespace

DiskBoundarySolver::DiskBoundarySolver(std::vector<Patch> patches, int nodes)
    : patches_(std::move(patches)), P_(nodes), t_(cheb_nodes(nodes)) {
  if (P_ < 4) throw Error(ErrorCode::InvalidArgument, "at least 4 nodes per patch");
  const int n = patch_count(), P = P_;
  L_.resize(n * P, n * P);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < P; ++k) L_.row(i * P + k) = boundary_row(i, t_[k]);
  f_.resize(n * P);
  for (int j = 0; j < n; ++j) f_.segment(j * P, P).setConstant(patches_[j].half_length * pi / P);
}

Eigen::RowVectorXd DiskBoundarySolver::boundary_row(int i, double s) const {
  const int n = patch_count(), P = P_;
  static thread_local std::vector<std::pair<int, Eigen::MatrixXd>> cache;
  auto transform = [&]() -> const Eigen::MatrixXd& {
    for (auto& [p, m] : cache)
      if (p == P) return m;
    cache.emplace_back(P, cheb_transform(P));
    return cache.back().second;
  };
  const Eigen::MatrixXd& C = transform();
  const double th = patches_[i].center + patches_[i].half_length * s;
  Eigen::RowVectorXd row(n * P);
  for (int j = 0; j < n; ++j) {
    const double ej = patches_[j].half_length;
    Eigen::RowVectorXd r(P);
    if (j == i) {
      // ln|s - t| by product integration against T_m / sqrt(1 - t^2)
      Eigen::RowVectorXd lam = cheb_row(P, std::clamp(s, -1.0, 1.0));
      lam(0) = -pi * std::log(2.0);
      for (int m = 1; m < P; ++m) lam(m) *= -pi / m;
      r = lam * C;
      for (int k = 0; k < P; ++k) r(k) += pi / P * (std::log(ej) + lsinc(ej * (s - t_[k]) / 2));
    } else {
      const int Q = 4 * P;
      r.setZero();
      for (int q = 0; q < Q; ++q) {
        double tau = std::cos((2.0 * q + 1) * pi / (2.0 * Q));
        double phi = patches_[j].center + ej * tau;
        double ker = std::log(std::abs(2 * std::sin((th - phi) / 2)));
        r += (pi / Q * ker) * (cheb_row(P, tau) * C);
      }
    }
    row.segment(j * P, P) = -(ej / pi) * r;
  }
  return row;
}

double DiskBoundarySolver::potential(const Eigen::VectorXd& w, Vec2 x) const {
  const int n = patch_count(), P = P_;
  const double r = x.norm();
  if (r > 1 + 1e-9) throw Error(ErrorCode::Domain, "point outside the unit disk");
  const double th = std::atan2(x.y, x.x);
  if (r > 1 - 1e-12) {
    for (int i = 0; i < n; ++i) {
      double d = wrap_angle(th - patches_[i].center);
      if (std::abs(d) <= patches_[i].half_length) return boundary_row(i, d / patches_[i].half_length).dot(w);
    }
  }
  Eigen::MatrixXd C = cheb_transform(P);
  double u = 0;
  for (int j = 0; j < n; ++j) {
    const double ej = patches_[j].half_length;
    Eigen::VectorXd a = C * w.segment(j * P, P);
    double d = wrap_angle(th - patches_[j].center);
    double dist;
    if (std::abs(d) <= ej)
      dist = 1 - r;
    else
      dist = (x - Vec2{std::cos(patches_[j].center + (d > 0 ? ej : -ej)), std::sin(patches_[j].center + (d > 0 ? ej : -ej))}).norm();
    int Q = static_cast<int>(std::min(16384.0, std::max(2.0 * P, 8 * ej / std::max(dist, 1e-9))));
    double acc = 0;
    for (int q = 0; q < Q; ++q) {
      double tau = std::cos((2.0 * q + 1) * pi / (2.0 * Q));
      double phi = patches_[j].center + ej * tau;
      double ker = 0.5 * std::log(std::max(1 - 2 * r * std::cos(th - phi) + r * r, 1e-300));
      acc += ker * cheb_row(P, tau).dot(a);
    }
    u += -(ej / pi) * (pi / Q) * acc;
  }
  return u;
}

double Field::operator()(Vec2 x) const {
  double v = mean + solver->potential(w, x);
  if (extra) v += extra(x);
  return v;
}

namespace {

void check_boundary_only(const Scene& s) {
  if (!s.targets.empty()) throw Error(ErrorCode::Unsupported, "interior targets need the circle solvers");
  if (s.patches.empty()) throw Error(ErrorCode::InvalidArgument, "no patches");
}

// Rows for Dirichlet (u = value) or Robin (w = q S (value - u)) on every patch.
// The last unknown is ubar; the last row fixes the total flux.
Eigen::VectorXd solve_mixed(const DiskBoundarySolver& sv, const std::vector<double>& value, double total_flux,
                            double ridge) {
  const int n = sv.patch_count(), P = sv.nodes(), N = n * P;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, N + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(N + 1);
  const auto& t = sv.t();
  for (int i = 0; i < n; ++i) {
    const Patch& p = sv.patches()[i];
    for (int k = 0; k < P; ++k) {
      int r = i * P + k;
      if (p.bc == Bc::Dirichlet) {
        A.row(r).head(N) = sv.L().row(r);
        A(r, N) = 1;
        b(r) = value[i];
      } else if (p.bc == Bc::Robin) {
        double qs = p.q * std::sqrt(1 - t[k] * t[k]);
        A.row(r).head(N) = qs * sv.L().row(r);
        A(r, r) += 1;
        A(r, N) = qs;
        b(r) = qs * value[i];
      } else {
        throw Error(ErrorCode::InvalidArgument, "Steklov patches belong to collocation_steklov");
      }
    }
  }
  A.row(N).head(N) = sv.flux();
  b(N) = total_flux;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  if (!rcond_ok(lu, ridge))
    throw Error(ErrorCode::Resolution, "collocation system is ill-conditioned; change nodes_per_patch");
  return lu.solve(b);
}

}  // namespace

CollocationSplitting collocation_splitting(const Scene& s, int k, const CollocationConfig& cfg) {
  require_disk(s);
  check_boundary_only(s);
  const int n = static_cast<int>(s.patches.size());
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "target index out of range");
  auto sv = std::make_shared<DiskBoundarySolver>(s.patches, cfg.nodes_per_patch);
  std::vector<double> val(n, 0.0);
  val[k] = 1;
  Eigen::VectorXd x = solve_mixed(*sv, val, 0, cfg.ridge);
  const int N = n * cfg.nodes_per_patch;
  CollocationSplitting out;
  out.chi = x(N);
  out.field.mean = x(N);
  out.field.w = x.head(N);
  out.field.solver = sv;
  return out;
}

CollocationMfrt collocation_mfrt(const Scene& s, const CollocationConfig& cfg) {
  require_disk(s);
  check_boundary_only(s);
  const int n = static_cast<int>(s.patches.size());
  auto sv = std::make_shared<DiskBoundarySolver>(s.patches, cfg.nodes_per_patch);
  // u = (1 - r^2)/4 + v, v harmonic with flux 1/2 on the reflecting part.
  Eigen::VectorXd x = solve_mixed(*sv, std::vector<double>(n, 0.0), -pi, cfg.ridge);
  const int N = n * cfg.nodes_per_patch;
  CollocationMfrt out;
  out.ubar = x(N) + 0.125;
  out.field.mean = x(N);
  out.field.w = x.head(N);
  out.field.solver = sv;
  out.field.extra = [](Vec2 p) { return (1 - p.norm2()) / 4; };
  return out;
}

CollocationSteklov collocation_steklov(const Scene& s, int J, const CollocationConfig& cfg) {
  require_disk(s);
  check_boundary_only(s);
  const int n = static_cast<int>(s.patches.size()), P = cfg.nodes_per_patch;
  std::vector<int> S, D;
  for (int i = 0; i < n; ++i) {
    if (s.patches[i].bc == Bc::Steklov)
      S.push_back(i);
    else if (s.patches[i].bc == Bc::Dirichlet)
      D.push_back(i);
    else
      throw Error(ErrorCode::InvalidArgument, "Robin patches are not part of the Steklov layouts");
  }
  if (S.empty()) throw Error(ErrorCode::InvalidArgument, "no Steklov patch");
  // Reorder: Steklov first.
  std::vector<Patch> ord;
  for (int i : S) ord.push_back(s.patches[i]);
  for (int i : D) ord.push_back(s.patches[i]);
  auto sv = std::make_shared<DiskBoundarySolver>(ord, P);
  const int nS = static_cast<int>(S.size()) * P, nD = static_cast<int>(D.size()) * P;
  const Eigen::MatrixXd& L = sv->L();
  const Eigen::RowVectorXd& f = sv->flux();
  Eigen::VectorXd Sq(nS);
  for (int i = 0; i < nS; ++i) Sq(i) = std::sqrt(1 - sv->t()[i % P] * sv->t()[i % P]);

  // full(wS) = [wS; wD; ubar]
  Eigen::MatrixXd ext(nS + nD + 1, nS);
  ext.setZero();
  ext.topRows(nS).setIdentity();
  if (nD > 0) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nD + 1, nD + 1);
    M.topLeftCorner(nD, nD) = L.bottomRightCorner(nD, nD);
    M.col(nD).head(nD).setOnes();
    M.row(nD).head(nD) = f.tail(nD);
    Eigen::MatrixXd rhs(nD + 1, nS);
    rhs.topRows(nD) = -L.bottomLeftCorner(nD, nS);
    rhs.row(nD) = -f.head(nS);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    if (!rcond_ok(lu, cfg.ridge)) throw Error(ErrorCode::Resolution, "Dirichlet block is ill-conditioned");
    ext.bottomRows(nD + 1) = lu.solve(rhs);
  } else {
    Eigen::RowVectorXd fS = f.head(nS).cwiseProduct(Sq.transpose());
    ext.row(nS) = -(fS * L.topLeftCorner(nS, nS)) / fS.sum();
  }
  // u on the Steklov nodes as a map of wS
  Eigen::MatrixXd T = L.topRows(nS) * ext.topRows(nS + nD) + Eigen::VectorXd::Ones(nS) * ext.row(nS + nD);
  Eigen::MatrixXd Op = Sq.asDiagonal() * T;
  Eigen::EigenSolver<Eigen::MatrixXd> es(Op);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "eigen-solve failed");
  struct Mode {
    double sigma;
    Eigen::VectorXd full;
  };
  std::vector<Mode> modes;
  for (int i = 0; i < nS; ++i) {
    std::complex<double> lam = es.eigenvalues()(i);
    if (lam.real() <= 0 || std::abs(lam.imag()) > 1e-8 * std::abs(lam)) continue;
    Eigen::VectorXd v = es.eigenvectors().col(i).real();
    modes.push_back({1 / lam.real(), ext * v});
  }
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.sigma < b.sigma; });
  CollocationSteklov out;
  out.steklov_patches = S;
  std::vector<Eigen::VectorXd> vecs;
  if (D.empty()) {
    out.sigma.push_back(0);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nS + nD + 1);
    c(nS + nD) = 1;
    vecs.push_back(c);
  }
  for (auto& m : modes) {
    if (static_cast<int>(out.sigma.size()) >= J) break;
    out.sigma.push_back(m.sigma);
    vecs.push_back(m.full);
  }
  // normalize traces
  const int nSp = static_cast<int>(S.size());
  auto raw = [sv, vecs, nS, nD](int j, int i, double x) {
    const Eigen::VectorXd& v = vecs[j];
    return v(nS + nD) + sv->boundary_row(i, x).dot(v.head(nS + nD));
  };
  boost::math::quadrature::gauss<double, 40> gq;
  std::vector<double> scale(vecs.size());
  for (size_t j = 0; j < vecs.size(); ++j) {
    double norm = 0;
    for (int i = 0; i < nSp; ++i) {
      double e = ord[i].half_length;
      norm += e * gq.integrate([&](double th) {
        double u = raw(static_cast<int>(j), i, std::cos(th));
        return u * u * std::sin(th);
      }, 0.0, pi);
    }
    double sgn = gq.integrate([&](double th) { return raw(static_cast<int>(j), 0, std::cos(th)) * std::sin(th); }, 0.0, pi);
    if (std::abs(sgn) < 1e-8) sgn = raw(static_cast<int>(j), 0, 0.5);
    scale[j] = (sgn < 0 ? -1 : 1) / std::sqrt(norm);
  }
  out.trace = [raw, scale](int j, int i, double x) { return scale.at(j) * raw(j, i, x); };
  return out;
}

WholeDiskSteklov collocation_whole_disk(int J, const CollocationConfig& cfg) {
  const int M = cfg.harmonics, Q = 4 * M + 4;
  // Fourier basis 1, cos n th, sin n th; values and normal derivatives at Q nodes.
  Eigen::MatrixXd V(Q, 2 * M + 1), D(Q, 2 * M + 1);
  for (int q = 0; q < Q; ++q) {
    double th = 2 * pi * q / Q;
    V(q, 0) = 1;
    D(q, 0) = 0;
    for (int k = 1; k <= M; ++k) {
      V(q, 2 * k - 1) = std::cos(k * th);
      V(q, 2 * k) = std::sin(k * th);
      D(q, 2 * k - 1) = k * std::cos(k * th);
      D(q, 2 * k) = k * std::sin(k * th);
    }
  }
  // least-squares reduction of D c = sigma V c
  Eigen::MatrixXd Op = V.colPivHouseholderQr().solve(D);
  Eigen::EigenSolver<Eigen::MatrixXd> es(Op);
  std::vector<std::pair<double, Eigen::VectorXd>> modes;
  for (int i = 0; i < Op.rows(); ++i) modes.push_back({es.eigenvalues()(i).real(), es.eigenvectors().col(i).real()});
  std::sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  WholeDiskSteklov out;
  for (int j = 0; j < J && j < static_cast<int>(modes.size()); ++j) {
    out.sigma.push_back(modes[j].first);
    const Eigen::VectorXd& c = modes[j].second;
    int k = static_cast<int>(std::lround(modes[j].first));
    double in = c(0) * c(0);
    if (k > 0) in = c(2 * k - 1) * c(2 * k - 1) + c(2 * k) * c(2 * k);
    out.residual.push_back(std::sqrt(std::max(0.0, 1 - in / c.squaredNorm())));
  }
  return out;
}

namespace {

// Harmonic expansion in the unit disk with circular holes:
//   regular part  sum_n r^n (a_n cos + b_n sin)
//   hole j        g_j0 ln(rho_j / R_j) + sum_n (R_j / rho_j)^n (g_jn cos + h_jn sin)
// Conditions are Fourier-projected on every circle, giving A x = sigma B x + rhs.
struct CircleSystem {
  Eigen::MatrixXd A, B;
  Eigen::VectorXd rhs;
  int Mo = 0, Mh = 0, Q = 0;
  std::vector<Circle> holes;
  int unknowns() const { return 2 * Mo + 1 + static_cast<int>(holes.size()) * (2 * Mh + 1); }
  int hole_offset(int j) const { return 2 * Mo + 1 + j * (2 * Mh + 1); }
};

// Values and gradients of every basis function at x.
void basis_at(const CircleSystem& cs, Vec2 x, Eigen::VectorXd& val, Eigen::VectorXd& gx, Eigen::VectorXd& gy) {
  const int U = cs.unknowns();
  val.setZero(U);
  gx.setZero(U);
  gy.setZero(U);
  std::complex<double> z(x.x, x.y);
  // r^n e^{i n th} = z^n, gradient of Re/Im via the complex derivative n z^{n-1}
  std::complex<double> zn(1, 0), dzn(0, 0);
  val(0) = 1;
  for (int n = 1; n <= cs.Mo; ++n) {
    dzn = static_cast<double>(n) * zn;
    zn *= z;
    val(2 * n - 1) = zn.real();
    val(2 * n) = zn.imag();
    gx(2 * n - 1) = dzn.real();
    gy(2 * n - 1) = -dzn.imag();
    gx(2 * n) = dzn.imag();
    gy(2 * n) = dzn.real();
  }
  for (size_t j = 0; j < cs.holes.size(); ++j) {
    const Circle& h = cs.holes[j];
    int o = cs.hole_offset(static_cast<int>(j));
    std::complex<double> w(x.x - h.center.x, x.y - h.center.y);
    double rho2 = std::norm(w);
    val(o) = 0.5 * std::log(rho2 / (h.radius * h.radius));
    gx(o) = w.real() / rho2;
    gy(o) = w.imag() / rho2;
    // (R / w)^n = R^n w^{-n}; conj-free form: Re and Im of (R/w)^n give cos/ -sin
    std::complex<double> s = h.radius / w, sn(1, 0);
    for (int n = 1; n <= cs.Mh; ++n) {
      sn *= s;
      std::complex<double> d = -static_cast<double>(n) * sn / w;  // d/dw (R/w)^n
      // (R/rho)^n cos(n phi) = Re(s^n), (R/rho)^n sin(n phi) = -Im(s^n)
      val(o + 2 * n - 1) = sn.real();
      gx(o + 2 * n - 1) = d.real();
      gy(o + 2 * n - 1) = -d.imag();
      val(o + 2 * n) = -sn.imag();
      gx(o + 2 * n) = -d.imag();
      gy(o + 2 * n) = -d.real();
    }
  }
}

enum class Outer { Neumann, Steklov };

// dirichlet_values: per hole, used on Dirichlet holes.
CircleSystem circle_system(const std::vector<Circle>& holes, Outer outer, const std::vector<double>& dirichlet_values,
                           const CollocationConfig& cfg) {
  for (size_t j = 0; j < holes.size(); ++j) {
    const Circle& h = holes[j];
    if (!(h.radius > 0) || h.center.norm() + h.radius >= 1)
      throw Error(ErrorCode::Domain, "hole must lie strictly inside the unit disk");
    for (size_t i = 0; i < j; ++i)
      if ((h.center - holes[i].center).norm() <= h.radius + holes[i].radius)
        throw Error(ErrorCode::Overlap, "holes overlap");
    if (h.bc == Bc::Robin) throw Error(ErrorCode::Unsupported, "Robin holes are not supported");
  }
  CircleSystem cs;
  cs.holes = holes;
  cs.Mo = cfg.harmonics;
  cs.Mh = std::max(8, cfg.harmonics / 2);
  cs.Q = 4 * std::max(cs.Mo, cs.Mh) + 8;
  const int U = cs.unknowns();
  cs.A.setZero(U, U);
  cs.B.setZero(U, U);
  cs.rhs.setZero(U);
  Eigen::VectorXd val, gx, gy;
  // Fourier projection weights for mode m on Q equispaced nodes
  auto project = [&](int row0, int M, auto&& sample) {
    for (int q = 0; q < cs.Q; ++q) {
      double th = 2 * pi * q / cs.Q;
      Eigen::VectorXd a(U), b(U);
      sample(th, a, b);
      cs.A.row(row0) += a.transpose() / cs.Q;
      cs.B.row(row0) += b.transpose() / cs.Q;
      for (int m = 1; m <= M; ++m) {
        cs.A.row(row0 + 2 * m - 1) += 2 * std::cos(m * th) / cs.Q * a.transpose();
        cs.B.row(row0 + 2 * m - 1) += 2 * std::cos(m * th) / cs.Q * b.transpose();
        cs.A.row(row0 + 2 * m) += 2 * std::sin(m * th) / cs.Q * a.transpose();
        cs.B.row(row0 + 2 * m) += 2 * std::sin(m * th) / cs.Q * b.transpose();
      }
    }
  };
  project(0, cs.Mo, [&](double th, Eigen::VectorXd& a, Eigen::VectorXd& b) {
    Vec2 x{std::cos(th), std::sin(th)};
    basis_at(cs, x, val, gx, gy);
    a = gx * x.x + gy * x.y;  // d/dr
    b = outer == Outer::Steklov ? val : Eigen::VectorXd::Zero(U);
  });
  for (size_t j = 0; j < holes.size(); ++j) {
    const Circle& h = holes[j];
    int r0 = cs.hole_offset(static_cast<int>(j));
    project(r0, cs.Mh, [&](double th, Eigen::VectorXd& a, Eigen::VectorXd& b) {
      Vec2 e{std::cos(th), std::sin(th)};
      basis_at(cs, h.center + e * h.radius, val, gx, gy);
      if (h.bc == Bc::Dirichlet) {
        a = val;
        b.setZero(U);
      } else {
        a = -(gx * e.x + gy * e.y);  // outward normal of the domain points into the hole
        b = val;
      }
    });
    if (h.bc == Bc::Dirichlet && j < dirichlet_values.size()) cs.rhs(r0) = dirichlet_values[j];
  }
  return cs;
}

std::vector<double> circle_eigenvalues(const CircleSystem& cs, int J) {
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(cs.A, cs.B, false);
  if (ges.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "generalized eigen-solve failed");
  std::vector<double> sig;
  for (int i = 0; i < cs.A.rows(); ++i) {
    std::complex<double> al = ges.alphas()(i);
    double be = ges.betas()(i);
    if (std::abs(be) < 1e-10 * std::abs(al) || be == 0) continue;
    std::complex<double> lam = al / be;
    if (std::abs(lam.imag()) > 1e-8 * (1 + std::abs(lam.real())) || lam.real() < -1e-10) continue;
    sig.push_back(std::max(0.0, lam.real()));
  }
  std::sort(sig.begin(), sig.end());
  if (static_cast<int>(sig.size()) > J) sig.resize(J);
  return sig;
}

}  // namespace

std::vector<double> collocation_annulus(double inner_radius, int J, const CollocationConfig& cfg) {
  if (!(inner_radius > 0 && inner_radius < 1)) throw Error(ErrorCode::InvalidArgument, "inner radius must lie in (0, 1)");
  CollocationConfig c = cfg;
  CircleSystem cs = circle_system({{{0, 0}, inner_radius, Bc::Dirichlet}}, Outer::Steklov, {}, c);
  return circle_eigenvalues(cs, J);
}

double collocation_circles_splitting(const std::vector<Circle>& holes, int k, const CollocationConfig& cfg) {
  const int n = static_cast<int>(holes.size());
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "target index out of range");
  for (const auto& h : holes)
    if (h.bc != Bc::Dirichlet) throw Error(ErrorCode::InvalidArgument, "splitting needs Dirichlet holes");
  std::vector<double> vals(n, 0.0);
  vals[k] = 1;
  CircleSystem cs = circle_system(holes, Outer::Neumann, vals, cfg);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(cs.A);
  if (!rcond_ok(lu, cfg.ridge)) throw Error(ErrorCode::Resolution, "circle system is ill-conditioned");
  Eigen::VectorXd x = lu.solve(cs.rhs);
  // area integral of u through Green's identity with w = |x|^2/4
  Eigen::VectorXd val, gx, gy;
  double integral = 0, area = pi;
  for (int q = 0; q < cs.Q; ++q) {
    double th = 2 * pi * q / cs.Q;
    Vec2 e{std::cos(th), std::sin(th)};
    basis_at(cs, e, val, gx, gy);
    integral += (val.dot(x) * 0.5 - 0.25 * (e.x * gx + e.y * gy).dot(x)) * 2 * pi / cs.Q;
  }
  for (const auto& h : holes) {
    area -= pi * h.radius * h.radius;
    for (int q = 0; q < cs.Q; ++q) {
      double th = 2 * pi * q / cs.Q;
      Vec2 e{std::cos(th), std::sin(th)};
      Vec2 p = h.center + e * h.radius;
      basis_at(cs, p, val, gx, gy);
      Vec2 nrm = e * -1.0;
      double dnw = 0.5 * p.dot(nrm);
      double dnu = (nrm.x * gx + nrm.y * gy).dot(x);
      integral += (val.dot(x) * dnw - 0.25 * p.norm2() * dnu) * 2 * pi * h.radius / cs.Q;
    }
  }
  return integral / area;
}

double collocation_circles_steklov(const std::vector<Circle>& holes, const CollocationConfig& cfg) {
  int ns = 0;
  for (const auto& h : holes) ns += h.bc == Bc::Steklov;
  if (ns != 1 || holes.size() < 2) throw Error(ErrorCode::InvalidArgument, "expected one Steklov hole and Dirichlet holes");
  CircleSystem cs = circle_system(holes, Outer::Neumann, {}, cfg);
  auto s = circle_eigenvalues(cs, 1);
  if (s.empty()) throw Error(ErrorCode::Numerical, "no eigenvalue found");
  return s[0];
}

// ---------------------------------------------------------------- Monte Carlo

std::vector<Vec2> stratified_points() {
  std::vector<Vec2> pts;
  for (int a = 0; a < 4; ++a) {
    double r = std::sqrt((a + 0.5) / 4);
    for (int s = 0; s < 5; ++s) {
      double th = 2 * pi * (s + 0.5) / 5;
      pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
  }
  return pts;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Absorbers {
  std::vector<Patch> arcs;
  std::vector<InteriorTarget> disks;
  int count() const { return static_cast<int>(arcs.size() + disks.size()); }

  // index of the arc containing boundary angle th, or -1
  int arc_at(double th) const {
    for (size_t i = 0; i < arcs.size(); ++i)
      if (std::abs(wrap_angle(th - arcs[i].center)) <= arcs[i].half_length) return static_cast<int>(i);
    return -1;
  }
  // Step-size scale: the bridge correction is exact for a flat absorbing wall,
  // so only arc endpoints and the curvature of small disks limit the step.
  double step_scale(Vec2 x) const {
    double d = 1e300;
    for (const auto& a : arcs)
      for (double e : {a.center - a.half_length, a.center + a.half_length})
        d = std::min(d, (x - Vec2{std::cos(e), std::sin(e)}).norm());
    for (const auto& t : disks) d = std::min(d, std::max((x - t.center).norm() - t.size, 0.25 * t.size));
    return d;
  }
};

Absorbers absorbers_of(const Scene& s) {
  if (s.domain.kind != DomainKind::DiskInterior) throw Error(ErrorCode::Unsupported, "random walks run on the unit disk");
  s.validate();
  Absorbers ab;
  for (const auto& p : s.patches) {
    if (p.bc != Bc::Dirichlet) throw Error(ErrorCode::Unsupported, "random walks support Dirichlet absorbers only");
    ab.arcs.push_back(p);
  }
  for (const auto& t : s.targets) {
    if (t.bc != Bc::Dirichlet || t.shape != TargetShape::Disk)
      throw Error(ErrorCode::Unsupported, "random walks support Dirichlet disk targets only");
    ab.disks.push_back(t);
  }
  if (ab.count() == 0) throw Error(ErrorCode::InvalidArgument, "no absorbers");
  return ab;
}

struct WalkResult {
  int hit = -1;
  double time = 0;
};

// First t in (0, 1] with |x + t v| = radius around c, entering from outside
// (inside = false) or leaving from inside (inside = true).
bool segment_circle(Vec2 x, Vec2 v, Vec2 c, double radius, bool inside, double& t) {
  Vec2 p = x - c;
  double a = v.norm2(), b = 2 * p.dot(v), cc = p.norm2() - radius * radius;
  double disc = b * b - 4 * a * cc;
  if (disc < 0 || a == 0) return false;
  double sq = std::sqrt(disc);
  t = inside ? (-b + sq) / (2 * a) : (-b - sq) / (2 * a);
  return t > 0 && t <= 1;
}

WalkResult walk(const Absorbers& ab, Vec2 x, std::mt19937_64& rng, const McConfig& cfg) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  WalkResult res;
  for (std::uint64_t step = 0; step < cfg.max_steps; ++step) {
    double d = ab.step_scale(x);
    double dt = std::clamp(cfg.step_factor * d * d, cfg.dt_min, cfg.dt_max);
    double sd = std::sqrt(2 * dt);
    Vec2 v{sd * gauss(rng), sd * gauss(rng)};
    res.time += dt;
    // interior disk targets crossed by the segment
    int hit = -1;
    double tbest = 2;
    for (size_t j = 0; j < ab.disks.size(); ++j) {
      double t;
      if (segment_circle(x, v, ab.disks[j].center, ab.disks[j].size, false, t) && t < tbest) {
        tbest = t;
        hit = static_cast<int>(ab.arcs.size() + j);
      }
    }
    Vec2 y = x + v;
    double tb;
    if (y.norm2() > 1 && segment_circle(x, v, {0, 0}, 1, true, tb) && tb < tbest) {
      Vec2 p = x + v * tb;
      int a = ab.arc_at(std::atan2(p.y, p.x));
      if (a >= 0) {
        res.hit = a;
        return res;
      }
      // specular reflection about the tangent at the crossing point
      Vec2 rest = y - p;
      y = p + rest - p * (2 * rest.dot(p));
      double r = y.norm();
      if (r > 1) y = y * ((2 - r) / r);
      if (y.norm() > 1) y = p * (1 - 1e-12);
    }
    if (hit >= 0) {
      res.hit = hit;
      return res;
    }
    // bridge crossing probability near absorbers
    double ry = y.norm();
    int a = ab.arc_at(std::atan2(y.y, y.x));
    if (a >= 0) {
      double d1 = 1 - x.norm(), d2 = 1 - ry;
      if (d1 >= 0 && d2 >= 0 && unif(rng) < std::exp(-d1 * d2 / dt)) {
        res.hit = a;
        return res;
      }
    }
    for (size_t j = 0; j < ab.disks.size(); ++j) {
      double d1 = (x - ab.disks[j].center).norm() - ab.disks[j].size;
      double d2 = (y - ab.disks[j].center).norm() - ab.disks[j].size;
      if (unif(rng) < std::exp(-d1 * d2 / dt)) {
        res.hit = static_cast<int>(ab.arcs.size() + j);
        return res;
      }
    }
    x = y;
  }
  throw Error(ErrorCode::Timeout, "walker exceeded max_steps; raise max_steps or dt_min");
}

Vec2 start_point(const std::vector<Vec2>& start, std::uint64_t i, std::mt19937_64& rng) {
  if (!start.empty()) return start[i % start.size()];
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int cell = static_cast<int>(i % 20), ring = cell / 5, sector = cell % 5;
  double r = std::sqrt((ring + unif(rng)) / 4);
  double th = 2 * pi * (sector + unif(rng)) / 5;
  return {r * std::cos(th), r * std::sin(th)};
}

// Runs all walkers in fixed chunks; per-chunk sums are reduced in chunk order.
Estimate run_walkers(const Scene& s, const std::vector<Vec2>& start, const McConfig& cfg,
                     const std::function<double(const WalkResult&)>& score) {
  Absorbers ab = absorbers_of(s);
  if (cfg.walkers < 1000) throw Error(ErrorCode::InvalidArgument, "at least 1000 walkers");
  for (const auto& p : start)
    if (p.norm() >= 1) throw Error(ErrorCode::Domain, "start point outside the unit disk");
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunks = (cfg.walkers + kChunk - 1) / kChunk;
  std::vector<double> sum(chunks, 0.0), sum2(chunks, 0.0);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure;
  ErrorCode failure_code = ErrorCode::Internal;
  std::mutex mu;
  auto t0 = std::chrono::steady_clock::now();
  auto worker = [&]() {
    for (;;) {
      std::uint64_t c = next++;
      if (c >= chunks || failed) return;
      try {
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > cfg.time_limit) throw Error(ErrorCode::Timeout, "Monte Carlo time limit exceeded");
        for (std::uint64_t i = c * kChunk; i < std::min(cfg.walkers, (c + 1) * kChunk); ++i) {
          std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(i)));
          Vec2 x = start_point(start, i, rng);
          double v = score(walk(ab, x, rng, cfg));
          sum[c] += v;
          sum2[c] += v * v;
        }
      } catch (const Error& e) {
        std::lock_guard<std::mutex> lk(mu);
        if (!failed) {
          failure = e.what();
          failure_code = e.code();
        }
        failed = true;
        return;
      }
    }
  };
  int nt = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failed) throw Error(failure_code, failure);
  double s1 = 0, s2 = 0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    s1 += sum[c];
    s2 += sum2[c];
  }
  const double n = static_cast<double>(cfg.walkers);
  Estimate e;
  e.samples = cfg.walkers;
  e.mean = s1 / n;
  double var = std::max(0.0, (s2 - n * e.mean * e.mean) / (n - 1));
  e.stderr_ = std::sqrt(var / n);
  return e;
}

}  // namespace

Estimate mc_splitting(const Scene& s, int k, const std::vector<Vec2>& start, const McConfig& cfg) {
  int n = static_cast<int>(s.patches.size() + s.targets.size());
  if (k < 0 || k >= n) throw Error(ErrorCode::InvalidArgument, "target index out of range");
  return run_walkers(s, start, cfg, [k](const WalkResult& w) { return w.hit == k ? 1.0 : 0.0; });
}

Estimate mc_mfpt(const Scene& s, const std::vector<Vec2>& start, const McConfig& cfg) {
  return run_walkers(s, start, cfg, [](const WalkResult& w) { return w.time; });
}

}  // namespace narrowpatch::oracle
