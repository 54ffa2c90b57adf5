#include "narrowpatch/halfplane.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace narrowpatch::halfplane {

using std::numbers::pi;
using cplx = std::complex<double>;

double c2_exact() { return (21 - 2 * pi * pi) / (18 * pi); }

HalfPlaneCoords halfplane_coords(Vec2 y) {
  if (y.y < 0) throw Error(ErrorCode::Domain, "half-plane point must have y2 >= 0");
  cplx w = std::acosh(cplx(y.x, y.y));
  return {w.real(), std::abs(w.imag())};
}

double g_dirichlet(Vec2 y) {
  // The harmonic function equals the elliptic radial coordinate: zero on the
  // focal segment, zero normal derivative on the rest of the axis, and
  // alpha = ln|y| + ln 2 + O(|y|^-2) far away.
  return halfplane_coords(y).alpha;
}

namespace {

// (2/pi) int_0^pi sin t cos nt cos mt dt
double a_nm(int n, int m) {
  if ((n + m) % 2) return 0;
  double d = m - n, s = m + n;
  return (2 / pi) * (1 / (1 - d * d) + 1 / (1 - s * s));
}

double series_value(const Eigen::MatrixXd& c, int k, int M, double alpha, double theta) {
  cplx w = std::exp(cplx(-alpha, theta)), p = 1;
  double s = 0;
  for (int n = 0; n <= M; ++n) {
    s += c(k, n) * p.real();
    p *= w;
    if (std::abs(p) < 1e-18) break;
  }
  return s;
}

}  // namespace

SteklovBasis build_basis(int K, int M) {
  if (K < 1 || M < 2) throw Error(ErrorCode::InvalidArgument, "build_basis needs K >= 1 and M >= 2");
  if (M < 2 * K) throw Error(ErrorCode::InvalidArgument, "build_basis needs M >= 2K");
  const double a00 = a_nm(0, 0);

  struct Mode {
    double mu;
    Eigen::VectorXd c;
    int parity;
  };
  std::vector<Mode> modes;
  for (int parity = 0; parity < 2; ++parity) {
    // n = 2, 4, ... (even block) or n = 1, 3, ... (odd block)
    std::vector<int> idx;
    for (int n = parity ? 1 : 2; n <= M; n += 2) idx.push_back(n);
    const int m = static_cast<int>(idx.size());
    Eigen::MatrixXd S(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        int n = idx[i], l = idx[j];
        double kk = a_nm(n, l) - a_nm(n, 0) * a_nm(0, l) / a00;
        S(i, j) = kk / std::sqrt(double(n) * l);
      }
    // generalized problem K c = (1/mu) diag(n) c in symmetric form
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::Numerical, "basis eigensolve failed");
    for (int i = 0; i < m; ++i) {
      double lam = es.eigenvalues()(i);
      if (lam <= 1e-14) continue;
      Eigen::VectorXd c = Eigen::VectorXd::Zero(M + 1);
      for (int j = 0; j < m; ++j) c(idx[j]) = es.eigenvectors()(j, i) / std::sqrt(double(idx[j]));
      double s = 0;
      for (int n = 1; n <= M; ++n) s += c(n) * a_nm(n, 0);
      c(0) = -s / a00;
      modes.push_back({1 / lam, c, parity});
    }
  }
  std::sort(modes.begin(), modes.end(), [](const Mode& x, const Mode& y) { return x.mu < y.mu; });
  if (static_cast<int>(modes.size()) < K - 1) throw Error(ErrorCode::Numerical, "not enough eigenpairs");

  SteklovBasis b;
  b.K = K;
  b.M = M;
  b.mu.assign(K, 0.0);
  b.c = Eigen::MatrixXd::Zero(K, M + 1);
  b.c(0, 0) = 1 / std::sqrt(2.0);
  for (int k = 1; k < K; ++k) {
    const Mode& md = modes[k - 1];
    if (md.parity != k % 2) {
      std::ostringstream os;
      os << "parity interlacing broken at mode " << k << "; increase M";
      throw Error(ErrorCode::Numerical, os.str());
    }
    Eigen::VectorXd c = md.c;
    double e = 0;
    for (int n = 1; n <= M; ++n) e += n * c(n) * c(n);
    c *= 1 / std::sqrt(pi * e / (2 * md.mu));
    b.mu[k] = md.mu;
    b.c.row(k) = c.transpose();
    // sign: positive overlap with cos(k pi y/2) (even k) or sin(k pi y/2) (odd k)
    const int nq = 2 * M + 1;
    double ov = 0;
    for (int q = 0; q < nq; ++q) {
      double t = pi * (q + 0.5) / nq, y = std::cos(t);
      double ref = (k % 2 == 0) ? std::cos(k * pi * y / 2) : std::sin(k * pi * y / 2);
      ov += series_value(b.c, k, M, 0, t) * ref * std::sin(t);
    }
    if (ov < 0) b.c.row(k) *= -1;
  }
  return b;
}

namespace {
constexpr char kMagic[4] = {'N', 'P', 'S', 'B'};
}

void save_basis(const SteklovBasis& b, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write basis file " + path);
  std::uint32_t hdr[3] = {kBasisFormatVersion, std::uint32_t(b.K), std::uint32_t(b.M)};
  f.write(kMagic, 4);
  f.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  for (int k = 0; k < b.K; ++k)
    for (int n = 0; n <= b.M; ++n) {
      double v = b.c(k, n);
      f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
  f.write(reinterpret_cast<const char*>(b.mu.data()), sizeof(double) * b.mu.size());
  if (!f) throw Error(ErrorCode::Io, "short write to basis file " + path);
}

SteklovBasis load_basis(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot read basis file " + path);
  char mg[4];
  std::uint32_t hdr[3];
  f.read(mg, 4);
  f.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  if (!f || std::string(mg, 4) != std::string(kMagic, 4)) throw Error(ErrorCode::Io, "not a basis file: " + path);
  if (hdr[0] != kBasisFormatVersion) throw Error(ErrorCode::Io, "basis file format version mismatch: " + path);
  SteklovBasis b;
  b.K = int(hdr[1]);
  b.M = int(hdr[2]);
  b.c.resize(b.K, b.M + 1);
  for (int k = 0; k < b.K; ++k)
    for (int n = 0; n <= b.M; ++n) f.read(reinterpret_cast<char*>(&b.c(k, n)), sizeof(double));
  b.mu.resize(b.K);
  f.read(reinterpret_cast<char*>(b.mu.data()), sizeof(double) * b.K);
  if (!f) throw Error(ErrorCode::Io, "truncated basis file " + path);
  return b;
}

SteklovBasis cached_basis(int K, int M, std::optional<std::string> cache_dir) {
  if (!cache_dir) {
    if (const char* e = std::getenv("NARROWPATCH_CACHE_DIR"); e && *e) cache_dir = e;
  }
  if (!cache_dir) return build_basis(K, M);
  namespace fs = std::filesystem;
  std::ostringstream name;
  name << "basis_K" << K << "_M" << M << "_v" << kBasisFormatVersion << ".bin";
  fs::path p = fs::path(*cache_dir) / name.str();
  if (fs::exists(p)) {
    try {
      SteklovBasis b = load_basis(p.string());
      if (b.K == K && b.M == M) return b;
    } catch (const Error&) {
      // stale or corrupt entry, rebuild below
    }
  }
  SteklovBasis b = build_basis(K, M);
  std::error_code ec;
  fs::create_directories(*cache_dir, ec);
  try {
    save_basis(b, p.string());
  } catch (const Error&) {
  }
  return b;
}

double psi_eval(const SteklovBasis& b, int k, Vec2 y) {
  if (k < 0 || k >= b.K) throw Error(ErrorCode::InvalidArgument, "mode index out of range");
  HalfPlaneCoords hc = halfplane_coords(y);
  return series_value(b.c, k, b.M, hc.alpha, hc.theta);
}

double psi_interval(const SteklovBasis& b, int k, double y1) {
  if (k < 0 || k >= b.K) throw Error(ErrorCode::InvalidArgument, "mode index out of range");
  if (std::abs(y1) > 1 + 1e-12) throw Error(ErrorCode::Domain, "interval point outside [-1, 1]");
  return series_value(b.c, k, b.M, 0, std::acos(std::clamp(y1, -1.0, 1.0)));
}

CFunction::CFunction(const SteklovBasis& b, bool tail, int even_modes) : tail_(tail) {
  int avail = b.even_count();
  if (even_modes < 0) even_modes = avail;
  if (even_modes > avail) throw Error(ErrorCode::InvalidArgument, "basis holds fewer even modes than requested");
  poles_.push_back(0);
  weights_.push_back(0.5);
  for (int j = 1; j <= even_modes; ++j) {
    poles_.push_back(b.mu[2 * j]);
    weights_.push_back(b.c(2 * j, 0) * b.c(2 * j, 0));
  }
}

namespace {

// (1/pi) sum_{k > kp} 1/(k (pi k + mu)): surrogate for the unretained modes
double tail_value(int kp, double mu) {
  double x = kp + 1, h = mu / pi;
  if (std::abs(h) < 1e-4) {
    using boost::math::polygamma;
    return (polygamma(1, x) + polygamma(2, x) * h / 2 + polygamma(3, x) * h * h / 6) / (pi * pi);
  }
  return (boost::math::digamma(x + h) - boost::math::digamma(x)) / (pi * mu);
}

double tail_derivative(int kp, double mu) {
  double x = kp + 1, h = mu / pi;
  using boost::math::polygamma;
  if (std::abs(h) < 1e-4) return (polygamma(2, x) / 2 + polygamma(3, x) * h / 3) / (pi * pi * pi);
  double d = boost::math::digamma(x + h) - boost::math::digamma(x);
  return (-d / (mu * mu) + polygamma(1, x + h) / (pi * mu)) / pi;
}

}  // namespace

double CFunction::operator()(double mu) const {
  double s = 0;
  for (size_t j = 0; j < poles_.size(); ++j) {
    double den = poles_[j] + mu;
    if (std::abs(den) <= 1e-9 * std::max(1.0, poles_[j])) {
      std::ostringstream os;
      os << "C(mu) evaluated at the pole mu = -mu_" << 2 * j;
      throw Error(ErrorCode::Pole, os.str());
    }
    s += weights_[j] / den;
  }
  double v = std::log(2.0) + pi * s;
  if (tail_) v += tail_value(even_modes(), mu);
  return v;
}

double CFunction::derivative(double mu) const {
  double s = 0;
  for (size_t j = 0; j < poles_.size(); ++j) {
    double den = poles_[j] + mu;
    if (std::abs(den) <= 1e-9 * std::max(1.0, poles_[j])) throw Error(ErrorCode::Pole, "C'(mu) evaluated at a pole");
    s -= weights_[j] / (den * den);
  }
  double v = pi * s;
  if (tail_) v += tail_derivative(even_modes(), mu);
  return v;
}

double g_robin(const SteklovBasis& b, double mu, Vec2 y) {
  double s = 0;
  for (int k = 0; k < b.K; k += 2) {
    double den = mu + b.mu[k];
    if (std::abs(den) <= 1e-9 * std::max(1.0, b.mu[k])) throw Error(ErrorCode::Pole, "g_robin evaluated at a pole");
    s += b.c(k, 0) * psi_eval(b, k, y) / den;
  }
  return g_dirichlet(y) + pi * s;
}

std::vector<double> taylor_coeffs(const SteklovBasis& b, int n_max, int even_modes, bool tail) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "n_max must be >= 1");
  int avail = b.even_count();
  if (even_modes < 0) even_modes = avail;
  if (even_modes > avail) throw Error(ErrorCode::InvalidArgument, "basis holds fewer even modes than requested");
  std::vector<double> out(n_max, 0.0);
  for (int n = 1; n <= n_max; ++n) {
    double s = 0;
    for (int j = 1; j <= even_modes; ++j) s += b.c(2 * j, 0) * b.c(2 * j, 0) / std::pow(b.mu[2 * j], n);
    double v = (n == 1 ? std::log(2.0) : 0.0) + pi * s;
    if (tail) {
      double partial = 0;
      for (int k = 1; k <= even_modes; ++k) partial += std::pow(double(k), -(n + 1));
      v += std::pow(pi, -1.0 - n) * (boost::math::zeta(double(n + 1)) - partial);
    }
    out[n - 1] = v;
  }
  return out;
}

}  // namespace narrowpatch::halfplane
