#include "narrowpatch/greens.hpp"

#include <array>
#include <complex>
#include <numbers>
#include <sstream>

namespace narrowpatch::greens {

using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

constexpr double kSeriesTol = 1e-16;
constexpr double kCoincident = 1e-14;

// ln|1 - w|, accurate for small |w|
double ln_abs_1m(cplx w) { return 0.5 * std::log1p(std::norm(w) - 2 * w.real()); }

void require_closure(const Domain& d, Vec2 x) {
  if (!d.contains(x)) throw Error(ErrorCode::Domain, "evaluation point lies outside the domain");
}

int series_terms(double beta) {
  if (beta <= 0) return 1;
  // beta^(2n) < tol
  int n = static_cast<int>(std::ceil(std::log(kSeriesTol) / (2 * std::log(beta)))) + 1;
  return std::clamp(n, 1, 100000);
}

// ln|1 - e^z|, accurate also for e^z close to 1
double ln_abs_1m_exp(cplx z) {
  double a = z.real(), b = z.imag(), sb = std::sin(0.5 * b);
  double re = std::expm1(a) * std::cos(b) - 2 * sb * sb;
  double im = std::exp(a) * std::sin(b);
  return std::log(std::hypot(re, im));
}

// sum_n sum_j ln|1 - beta^{2n} e^{z_j}|, optionally skipping the (n=0, first z) term
template <size_t J>
double image_sum(const std::array<cplx, J>& z, double beta, bool skip_first) {
  int nmax = series_terms(beta);
  double s = 0, lb2 = 2 * std::log(beta), f = 1;
  for (int n = 0; n < nmax; ++n) {
    for (size_t j = 0; j < J; ++j) {
      if (n == 0 && j == 0 && skip_first) continue;
      s += n == 0 ? ln_abs_1m_exp(z[j]) : ln_abs_1m(f * std::exp(z[j]));
    }
    f = std::exp((n + 1) * lb2);
    if (f < kSeriesTol) break;
  }
  return s;
}

// exponent of an image term; image_sum exponentiates
cplx ex(double re, double im) { return cplx(re, im); }

std::array<cplx, 8> bulk_images(const EllipseConst& E, Elliptic p, Elliptic q) {
  double ab = E.alpha_b, da = std::abs(p.alpha - q.alpha), sa = p.alpha + q.alpha;
  double tm = p.theta - q.theta, tp = p.theta + q.theta;
  return {ex(-da, tm),           ex(-4 * ab + da, tm), ex(-2 * ab - sa, tm), ex(-2 * ab + sa, tm),
          ex(-4 * ab + sa, tp),  ex(-sa, tp),          ex(-2 * ab + da, tp), ex(-2 * ab - da, tp)};
}

double disk_sq_term(const EllipseConst& E, Vec2 x, Vec2 xi) {
  return (norm2(x) + norm2(xi)) / (4 * pi * E.a * E.b) -
         3 * (E.a * E.a + E.b * E.b) / (16 * pi * E.a * E.b);
}

}  // namespace

EllipseConst::EllipseConst(const Domain& d) : a(d.a), b(d.b) {
  aE = std::sqrt(a * a - b * b);
  beta = (a - b) / (a + b);
  alpha_b = std::atanh(b / a);
}

Elliptic EllipseConst::coords(Vec2 x) const {
  cplx w = std::acosh(cplx(x.x / aE, x.y / aE));
  return {w.real(), w.imag()};
}

double EllipseConst::metric(double alpha, double theta) const {
  double sh = std::sinh(alpha), s = std::sin(theta);
  return aE * std::sqrt(sh * sh + s * s);
}

double surface_green(const Domain& d, Vec2 x, double t0) {
  d.validate();
  require_closure(d, x);
  Vec2 xi = d.point(t0);
  double r = norm(x - xi);
  if (r < kCoincident) throw Error(ErrorCode::Singularity, "surface_green evaluated at its source");
  switch (d.kind) {
    case DomainKind::DiskInterior:
      return -std::log(r) / pi + norm2(x) / (4 * pi) - 1 / (8 * pi);
    case DomainKind::DiskExterior:
      return -std::log(r) / pi + std::log(norm(x)) / (2 * pi);
    case DomainKind::EllipseInterior: {
      EllipseConst E(d);
      Elliptic p = E.coords(x);
      double ab = E.alpha_b, dt = p.theta - t0, st = p.theta + t0;
      std::array<cplx, 4> z{ex(-ab + p.alpha, dt), ex(-3 * ab - p.alpha, dt), ex(-3 * ab + p.alpha, st),
                            ex(-ab - p.alpha, st)};
      return disk_sq_term(E, x, xi) - image_sum(z, E.beta, false) / pi;
    }
    case DomainKind::EllipseExterior: {
      EllipseConst E(d);
      Elliptic p = E.coords(x);
      double la = ln_abs_1m_exp(cplx(E.alpha_b - p.alpha, p.theta - t0));
      return (std::log(2 / E.aE) - p.alpha) / (2 * pi) - la / pi;
    }
  }
  throw Error(ErrorCode::Internal, "unknown domain kind");
}

double regular_part(const Domain& d, double t0) {
  d.validate();
  switch (d.kind) {
    case DomainKind::DiskInterior: return 1 / (8 * pi);
    case DomainKind::DiskExterior: return 0;
    case DomainKind::EllipseInterior: {
      EllipseConst E(d);
      Vec2 xi = d.point(t0);
      double s = 0, b2n = 1;
      int nmax = series_terms(E.beta);
      for (int n = 1; n <= nmax; ++n) {
        double odd = b2n * E.beta;  // beta^{2n-1}
        b2n *= E.beta * E.beta;     // beta^{2n}
        if (odd < kSeriesTol) break;
        s += std::log1p(-b2n) + ln_abs_1m(odd * std::exp(cplx(0, 2 * t0)));
      }
      return norm2(xi) / (2 * pi * E.a * E.b) - 3 * (E.a * E.a + E.b * E.b) / (16 * pi * E.a * E.b) +
             std::log(E.metric(E.alpha_b, t0)) / pi - 2 * s / pi;
    }
    case DomainKind::EllipseExterior: {
      EllipseConst E(d);
      double sh = std::sinh(E.alpha_b), sn = std::sin(t0);
      return (std::log(2 * E.aE) - E.alpha_b + std::log(sh * sh + sn * sn)) / (2 * pi);
    }
  }
  throw Error(ErrorCode::Internal, "unknown domain kind");
}

namespace {

void require_bulk_source(const Domain& d, Vec2 xi) {
  if (d.interior()) {
    if (!d.contains(xi, 0) || d.boundary_distance(xi) < 1e-6)
      throw Error(ErrorCode::Domain, "bulk source must lie strictly inside the domain");
  } else if (d.contains(xi, -1e-6) == false || d.boundary_distance(xi) < 1e-6) {
    throw Error(ErrorCode::Domain, "bulk source must lie strictly outside the obstacle");
  }
}

}  // namespace

double bulk_green(const Domain& d, Vec2 x, Vec2 xi) {
  d.validate();
  require_closure(d, x);
  require_bulk_source(d, xi);
  double r = norm(x - xi);
  if (r < kCoincident) throw Error(ErrorCode::Singularity, "bulk_green evaluated at its source");
  switch (d.kind) {
    case DomainKind::DiskInterior: {
      double q = norm2(x) * norm2(xi) + 1 - 2 * dot(x, xi);
      return -std::log(r) / (2 * pi) - std::log(q) / (4 * pi) + (norm2(x) + norm2(xi)) / (4 * pi) -
             3 / (8 * pi);
    }
    case DomainKind::DiskExterior: {
      Vec2 img = (1 / norm2(xi)) * xi;
      return -(std::log(r) + std::log(norm(x - img)) - std::log(norm(x))) / (2 * pi);
    }
    case DomainKind::EllipseInterior: {
      EllipseConst E(d);
      Elliptic p = E.coords(x), q = E.coords(xi);
      double amax = std::max(p.alpha, q.alpha);
      return disk_sq_term(E, x, xi) + (E.alpha_b - amax) / (2 * pi) -
             image_sum(bulk_images(E, p, q), E.beta, false) / (2 * pi);
    }
    case DomainKind::EllipseExterior: {
      EllipseConst E(d);
      Elliptic p = E.coords(x), q = E.coords(xi);
      double amax = std::max(p.alpha, q.alpha), dt = p.theta - q.theta;
      double l1 = ln_abs_1m_exp(cplx(-std::abs(p.alpha - q.alpha), dt));
      double l2 = ln_abs_1m_exp(cplx(2 * E.alpha_b - p.alpha - q.alpha, dt));
      return (std::log(2 / E.aE) - amax) / (2 * pi) - (l1 + l2) / (2 * pi);
    }
  }
  throw Error(ErrorCode::Internal, "unknown domain kind");
}

double bulk_regular_part(const Domain& d, Vec2 xi) {
  d.validate();
  switch (d.kind) {
    case DomainKind::DiskInterior: {
      double r2 = norm2(xi);
      if (std::sqrt(r2) > 1 - 1e-6)
        throw Error(ErrorCode::Singularity, "bulk regular part requested within 1e-6 of the boundary");
      return -std::log1p(-r2) / (2 * pi) + r2 / (2 * pi) - 3 / (8 * pi);
    }
    case DomainKind::DiskExterior: {
      double r2 = norm2(xi);
      if (std::sqrt(r2) < 1 + 1e-6)
        throw Error(ErrorCode::Singularity, "bulk regular part requested within 1e-6 of the boundary");
      return -std::log1p(-1 / r2) / (2 * pi);
    }
    case DomainKind::EllipseInterior: {
      require_bulk_source(d, xi);
      EllipseConst E(d);
      Elliptic q = E.coords(xi);
      double s = image_sum(bulk_images(E, q, q), E.beta, true);
      return disk_sq_term(E, xi, xi) + (E.alpha_b - q.alpha) / (2 * pi) +
             std::log(E.metric(q.alpha, q.theta)) / (2 * pi) - s / (2 * pi);
    }
    case DomainKind::EllipseExterior: {
      require_bulk_source(d, xi);
      EllipseConst E(d);
      Elliptic q = E.coords(xi);
      double sh = std::sinh(q.alpha), sn = std::sin(q.theta);
      return (0.5 * std::log(sh * sh + sn * sn) + std::log(2.0) - q.alpha -
              std::log1p(-std::exp(-2 * (q.alpha - E.alpha_b)))) /
             (2 * pi);
    }
  }
  throw Error(ErrorCode::Internal, "unknown domain kind");
}

GreenMatrix green_matrix(const Domain& d, const std::vector<double>& centers,
                         const std::vector<double>& half_lengths) {
  d.validate();
  const int n = static_cast<int>(centers.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "green_matrix needs at least one center");
  if (!half_lengths.empty() && half_lengths.size() != centers.size())
    throw Error(ErrorCode::InvalidArgument, "half_lengths size mismatch");
  GreenMatrix gm;
  gm.mode = GreenMode::Surface;
  gm.scale = pi;
  gm.G.resize(n, n);
  double emax = 0;
  for (double e : half_lengths) emax = std::max(emax, e);
  for (int j = 0; j < n; ++j) {
    gm.G(j, j) = pi * regular_part(d, centers[j]);
    for (int i = j + 1; i < n; ++i) {
      if (norm(d.point(centers[i]) - d.point(centers[j])) < kCoincident) {
        std::ostringstream os;
        os << "patch centers " << j << " and " << i << " coincide";
        throw Error(ErrorCode::Degenerate, os.str());
      }
      double g = pi * surface_green(d, d.point(centers[j]), centers[i]);
      gm.G(j, i) = g;
      gm.G(i, j) = g;
      if (emax > 0) {
        double sep = d.arc_distance(centers[i], centers[j]);
        if (sep < 4 * emax) {
          std::ostringstream os;
          os << "patches " << j << " and " << i << " are closer than 4 max(eps) (arc separation " << sep
             << "); pairwise interaction is outside the asymptotic regime";
          gm.warnings.push_back(os.str());
        }
      }
    }
  }
  return gm;
}

GreenMatrix bulk_green_matrix(const Domain& d, const std::vector<Vec2>& centers) {
  d.validate();
  const int n = static_cast<int>(centers.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "bulk_green_matrix needs at least one center");
  GreenMatrix gm;
  gm.mode = GreenMode::Bulk;
  gm.scale = 2 * pi;
  gm.G.resize(n, n);
  for (int j = 0; j < n; ++j) {
    gm.G(j, j) = 2 * pi * bulk_regular_part(d, centers[j]);
    for (int i = j + 1; i < n; ++i) {
      if (norm(centers[i] - centers[j]) < kCoincident) {
        std::ostringstream os;
        os << "target centers " << j << " and " << i << " coincide";
        throw Error(ErrorCode::Degenerate, os.str());
      }
      double g = 2 * pi * bulk_green(d, centers[j], centers[i]);
      gm.G(j, i) = g;
      gm.G(i, j) = g;
    }
  }
  return gm;
}

}  // namespace narrowpatch::greens
