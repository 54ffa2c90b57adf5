#include "narrowpatch/narrowpatch.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "narrowpatch/capture.hpp"
#include "narrowpatch/extensions.hpp"
#include "narrowpatch/halfplane.hpp"
#include "narrowpatch/oracle.hpp"
#include "narrowpatch/scene_io.hpp"
#include "narrowpatch/steklov.hpp"

using namespace narrowpatch;
namespace hp = narrowpatch::halfplane;

struct np_scene {
  Scene s;
};

struct np_basis {
  hp::SteklovBasis b;
  hp::CFunction cf;
  explicit np_basis(hp::SteklovBasis basis) : b(std::move(basis)), cf(b) {}
};

struct np_result {
  std::string kind;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  std::vector<std::string> warnings;
  std::function<double(Vec2)> field;
  bool cappable = false;
  Scene scene;  // for masking field evaluations

  void scalar(const std::string& k, double v) { scalars.emplace_back(k, v); }
  void vec(const std::string& k, std::vector<double> v) { vectors.emplace_back(k, std::move(v)); }
  void vec(const std::string& k, const Eigen::VectorXd& v) { vectors.emplace_back(k, std::vector<double>(v.data(), v.data() + v.size())); }
  void warn(const std::vector<std::string>& w) { warnings.insert(warnings.end(), w.begin(), w.end()); }
};

namespace {

thread_local std::string g_last_error;

np_status fail(np_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
np_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return NP_OK;
  } catch (const Error& e) {
    return fail(static_cast<np_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NP_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

const np_basis& default_basis() {
  static std::once_flag once;
  static std::unique_ptr<np_basis> b;
  std::call_once(once, [] { b = std::make_unique<np_basis>(hp::cached_basis()); });
  return *b;
}

bool has_robin(const Scene& s) {
  for (const auto& p : s.patches)
    if (p.bc == Bc::Robin) return true;
  return false;
}

const np_basis& basis_or_default(const np_basis* b) { return b ? *b : default_basis(); }

bool inside(const Scene& s, Vec2 x) {
  if (!s.domain.contains(x, 0)) return false;
  for (const auto& t : s.targets)
    if ((x - t.center).norm() <= t.size) return false;
  return true;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

double sig12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

np_result* boundary_splitting(const Scene& s, const np_basis* b, int k) {
  const hp::CFunction* cf = has_robin(s) ? &basis_or_default(b).cf : nullptr;
  auto sol = std::make_shared<capture::SplittingSolution>(capture::solve_splitting(s, k, cf));
  auto r = std::make_unique<np_result>();
  r->kind = "splitting";
  r->scalar("target", k);
  r->scalar("chi", sol->chi);
  r->vec("A", sol->A);
  r->vec("nu", sol->nu);
  r->warn(sol->warnings);
  r->field = [sol](Vec2 x) { return sol->eval(x, false); };
  r->cappable = true;
  r->scene = s;
  return r.release();
}

}  // namespace

extern "C" {

const char* np_version(void) { return "1.0.0"; }

const char* np_status_name(np_status s) {
  if (s == NP_OK) return "ok";
  return error_code_name(static_cast<ErrorCode>(static_cast<int>(s)));
}

const char* np_last_error(void) { return g_last_error.c_str(); }

void np_string_free(char* s) { std::free(s); }

np_status np_scene_load(const char* path, np_scene** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new np_scene{load_scene(path)};
  });
}

np_status np_scene_parse(const char* json, np_scene** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new np_scene{parse_scene(json)};
  });
}

np_status np_scene_to_json(const np_scene* s, char** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    *out = dup(serialize_scene(s->s));
  });
}

np_status np_scene_counts(const np_scene* s, int* patches, int* targets) {
  return guard([&] {
    need(s, "scene");
    if (patches) *patches = static_cast<int>(s->s.patches.size());
    if (targets) *targets = static_cast<int>(s->s.targets.size());
  });
}

np_status np_scene_bbox(const np_scene* s, double* x0, double* x1, double* y0, double* y1) {
  return guard([&] {
    need(s, "scene");
    need(x0, "x0");
    need(x1, "x1");
    need(y0, "y0");
    need(y1, "y1");
    double f = s->s.domain.interior() ? 1 : 3;
    *x0 = -f * s->s.domain.a;
    *x1 = f * s->s.domain.a;
    *y0 = -f * s->s.domain.b;
    *y1 = f * s->s.domain.b;
  });
}

void np_scene_free(np_scene* s) { delete s; }

np_status np_basis_build(int K, int M, const char* cache_dir, np_basis** out) {
  return guard([&] {
    need(out, "out");
    std::optional<std::string> dir;
    if (cache_dir) dir = cache_dir;
    *out = new np_basis(hp::cached_basis(K, M, dir));
  });
}

np_status np_basis_load(const char* path, np_basis** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new np_basis(hp::load_basis(path));
  });
}

np_status np_basis_save(const np_basis* b, const char* path) {
  return guard([&] {
    need(b, "basis");
    need(path, "path");
    hp::save_basis(b->b, path);
  });
}

np_status np_basis_size(const np_basis* b, int* K, int* M) {
  return guard([&] {
    need(b, "basis");
    if (K) *K = b->b.K;
    if (M) *M = b->b.M;
  });
}

np_status np_basis_mu(const np_basis* b, int k, double* out) {
  return guard([&] {
    need(b, "basis");
    need(out, "out");
    if (k < 0 || k >= b->b.K) throw Error(ErrorCode::InvalidArgument, "mode index out of range");
    *out = b->b.mu[k];
  });
}

np_status np_basis_psi_inf(const np_basis* b, int k, double* out) {
  return guard([&] {
    need(b, "basis");
    need(out, "out");
    if (k < 0 || k >= b->b.K) throw Error(ErrorCode::InvalidArgument, "mode index out of range");
    *out = b->b.psi_inf(k);
  });
}

np_status np_basis_psi(const np_basis* b, int k, double y1, double y2, double* out) {
  return guard([&] {
    need(b, "basis");
    need(out, "out");
    *out = hp::psi_eval(b->b, k, {y1, y2});
  });
}

void np_basis_free(np_basis* b) { delete b; }

np_status np_cfun(const np_basis* b, double mu, int even_modes, int tail, double* out) {
  return guard([&] {
    need(b, "basis");
    need(out, "out");
    if (even_modes < 0 && tail) {
      *out = b->cf(mu);
    } else {
      hp::CFunction cf(b->b, tail != 0, even_modes);
      *out = cf(mu);
    }
  });
}

np_status np_cfun_exterior_disk(double mu, double* out) {
  return guard([&] {
    need(out, "out");
    *out = ext::c_exterior_disk(mu);
  });
}

np_status np_g_dirichlet(double y1, double y2, double* out) {
  return guard([&] {
    need(out, "out");
    *out = hp::g_dirichlet({y1, y2});
  });
}

np_status np_g_robin(const np_basis* b, double mu, double y1, double y2, double* out) {
  return guard([&] {
    need(b, "basis");
    need(out, "out");
    *out = hp::g_robin(b->b, mu, {y1, y2});
  });
}

np_status np_splitting(const np_scene* s, const np_basis* b, int target, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    *out = boundary_splitting(s->s, b, target);
  });
}

np_status np_mfrt(const np_scene* s, const np_basis* b, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    const hp::CFunction* cf = has_robin(s->s) ? &basis_or_default(b).cf : nullptr;
    auto sol = std::make_shared<capture::MfrtSolution>(capture::solve_mfrt(s->s, cf));
    auto r = std::make_unique<np_result>();
    r->kind = "mfrt";
    r->scalar("ubar", sol->ubar);
    r->vec("A", sol->A);
    r->vec("nu", sol->nu);
    r->warn(sol->warnings);
    r->field = [sol](Vec2 x) { return sol->eval(x); };
    r->scene = s->s;
    *out = r.release();
  });
}

np_status np_green_matrix(const np_scene* s, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    greens::GreenMatrix gm;
    if (!s->s.targets.empty()) {
      std::vector<Vec2> c;
      for (const auto& t : s->s.targets) c.push_back(t.center);
      gm = greens::bulk_green_matrix(s->s.domain, c);
    } else if (!s->s.domain.interior()) {
      gm = ext::exterior_scene_support(s->s);
    } else {
      gm = greens::green_matrix(s->s.domain, s->s.centers(), s->s.half_lengths());
    }
    auto r = std::make_unique<np_result>();
    r->kind = "green_matrix";
    r->scalar("size", static_cast<double>(gm.G.rows()));
    r->scalar("scale", gm.scale);
    std::vector<double> flat;
    for (int i = 0; i < gm.G.rows(); ++i)
      for (int j = 0; j < gm.G.cols(); ++j) flat.push_back(gm.G(i, j));
    r->vec("G", flat);
    r->warn(gm.warnings);
    *out = r.release();
  });
}

np_status np_sn_spectrum(const np_scene* s, const np_basis* b, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    (void)b;
    auto sp = steklov::sn_spectrum(s->s);
    auto r = std::make_unique<np_result>();
    r->kind = "sn_spectrum";
    r->vec("sigma", sp.sigma);
    r->vec("nu", sp.nu);
    for (int j = 0; j < sp.A.cols(); ++j) r->vec("A_" + std::to_string(j), Eigen::VectorXd(sp.A.col(j)));
    r->warn(sp.warnings);
    *out = r.release();
  });
}

np_status np_snd(const np_scene* s, const np_basis* b, int roots, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    if (roots < 0) throw Error(ErrorCode::InvalidArgument, "roots must be >= 0");
    const np_basis* bb = roots > 0 ? &basis_or_default(b) : nullptr;
    auto res = steklov::snd_principal(s->s, bb ? &bb->b : nullptr, bb ? &bb->cf : nullptr, roots);
    auto r = std::make_unique<np_result>();
    r->kind = "snd";
    r->scalar("steklov_patch", res.steklov);
    r->scalar("eps1", res.eps1);
    r->scalar("C", res.C);
    r->scalar("inv_eps_sigma0", res.inv_eps_sigma0);
    r->scalar("sigma0", res.sigma0);
    r->vec("mu_hat", res.roots);
    r->vec("sigma_higher", res.sigma_higher);
    r->vec("A", res.A);
    r->warn(res.warnings);
    *out = r.release();
  });
}

np_status np_snd_equally_spaced(int N, double eps, double l1, int mode, double a_emp, double* out) {
  return guard([&] {
    need(out, "out");
    if (mode < 0 || mode > 2) throw Error(ErrorCode::InvalidArgument, "mode must be 0, 1 or 2");
    *out = steklov::snd_equally_spaced(N, eps, l1, static_cast<steklov::EquallySpacedMode>(mode), a_emp);
  });
}

np_status np_interior_splitting(const np_scene* s, int target, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    auto sol = std::make_shared<capture::SplittingSolution>(ext::interior_splitting(s->s.domain, s->s.targets, target));
    auto r = std::make_unique<np_result>();
    r->kind = "interior_splitting";
    r->scalar("target", target);
    r->scalar("chi", sol->chi);
    r->vec("A", sol->A);
    r->vec("nu", sol->nu);
    r->warn(sol->warnings);
    r->field = [sol](Vec2 x) { return sol->eval(x, false); };
    r->cappable = true;
    r->scene = s->s;
    *out = r.release();
  });
}

np_status np_interior_snd(const np_scene* s, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    const auto& t = s->s.targets;
    int is = -1, id = -1;
    for (int i = 0; i < static_cast<int>(t.size()); ++i) {
      if (t[i].bc == Bc::Steklov) is = i;
      if (t[i].bc == Bc::Dirichlet) id = i;
    }
    if (t.size() != 2 || is < 0 || id < 0)
      throw Error(ErrorCode::InvalidArgument, "expected exactly one Steklov and one Dirichlet target");
    auto res = ext::interior_snd_principal(s->s.domain, t[is], t[id]);
    auto r = std::make_unique<np_result>();
    r->kind = "interior_snd";
    r->scalar("C", res.C);
    r->scalar("inv_eps_sigma0", res.inv_eps_sigma0);
    r->scalar("sigma0", res.sigma0);
    r->warn(res.warnings);
    *out = r.release();
  });
}

np_status np_basis_table(const np_basis* b, int taylor_terms, np_result** out) {
  return guard([&] {
    need(b, "basis");
    need(out, "out");
    auto r = std::make_unique<np_result>();
    r->kind = "basis";
    r->scalar("K", b->b.K);
    r->scalar("M", b->b.M);
    std::vector<double> k, mu, psi2;
    for (int i = 0; i < b->b.K; ++i) {
      k.push_back(i);
      mu.push_back(b->b.mu[i]);
      psi2.push_back(b->b.psi_inf(i) * b->b.psi_inf(i));
    }
    r->vec("k", k);
    r->vec("mu", mu);
    r->vec("psi_inf_sq", psi2);
    if (taylor_terms > 0) {
      r->vec("taylor_C", hp::taylor_coeffs(b->b, taylor_terms));
      r->scalar("C1_exact", hp::kC1Exact);
      r->scalar("C2_exact", hp::c2_exact());
    }
    *out = r.release();
  });
}

np_status np_kappa_table(int N, double a_emp, np_result** out) {
  return guard([&] {
    need(out, "out");
    if (N < 2) throw Error(ErrorCode::InvalidArgument, "N must be >= 2");
    auto r = std::make_unique<np_result>();
    r->kind = "kappa";
    r->scalar("N", N);
    if (N < 8) r->warnings.push_back("asymptotic kappa forms are intended for N >= 8");
    std::vector<double> j, ex, full, cubic, low, emp;
    for (int i = 1; i <= N / 2; ++i) {
      j.push_back(i);
      ex.push_back(capture::kappa_exact(N, i));
      full.push_back(capture::kappa_asymptotic(N, i, capture::KappaOrder::Full));
      cubic.push_back(capture::kappa_asymptotic(N, i, capture::KappaOrder::Cubic));
      low.push_back(capture::kappa_asymptotic(N, i, capture::KappaOrder::LowOrder));
      emp.push_back(capture::kappa_asymptotic(N, i, capture::KappaOrder::Empirical, a_emp));
    }
    r->vec("j", j);
    r->vec("exact", ex);
    r->vec("full", full);
    r->vec("cubic", cubic);
    r->vec("loworder", low);
    r->vec("empirical", emp);
    r->scalar("kappa_N", capture::kappa_exact(N, N));
    *out = r.release();
  });
}

np_status np_oracle_splitting(const np_scene* s, int target, int nodes_per_patch, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    oracle::CollocationConfig cfg;
    if (nodes_per_patch > 0) cfg.nodes_per_patch = nodes_per_patch;
    auto sol = std::make_shared<oracle::CollocationSplitting>(oracle::collocation_splitting(s->s, target, cfg));
    auto r = std::make_unique<np_result>();
    r->kind = "oracle_splitting";
    r->scalar("target", target);
    r->scalar("chi", sol->chi);
    r->scalar("nodes_per_patch", cfg.nodes_per_patch);
    r->field = [sol](Vec2 x) { return sol->field(x); };
    r->cappable = true;
    r->scene = s->s;
    *out = r.release();
  });
}

np_status np_oracle_mfrt(const np_scene* s, int nodes_per_patch, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    oracle::CollocationConfig cfg;
    if (nodes_per_patch > 0) cfg.nodes_per_patch = nodes_per_patch;
    auto sol = std::make_shared<oracle::CollocationMfrt>(oracle::collocation_mfrt(s->s, cfg));
    auto r = std::make_unique<np_result>();
    r->kind = "oracle_mfrt";
    r->scalar("ubar", sol->ubar);
    r->scalar("nodes_per_patch", cfg.nodes_per_patch);
    r->field = [sol](Vec2 x) { return sol->field(x); };
    r->scene = s->s;
    *out = r.release();
  });
}

np_status np_oracle_steklov(const np_scene* s, int count, int nodes_per_patch, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    oracle::CollocationConfig cfg;
    if (nodes_per_patch > 0) cfg.nodes_per_patch = nodes_per_patch;
    auto sol = oracle::collocation_steklov(s->s, count, cfg);
    auto r = std::make_unique<np_result>();
    r->kind = "oracle_steklov";
    r->vec("sigma", sol.sigma);
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(-1 + 0.1 * i);
    r->vec("trace_s", grid);
    for (size_t j = 0; j < sol.sigma.size(); ++j)
      for (size_t i = 0; i < sol.steklov_patches.size(); ++i) {
        std::vector<double> v;
        for (double x : grid) v.push_back(sol.trace(static_cast<int>(j), static_cast<int>(i), x));
        r->vec("trace_" + std::to_string(j) + "_patch_" + std::to_string(sol.steklov_patches[i]), v);
      }
    *out = r.release();
  });
}

np_status np_oracle_annulus(double inner_radius, int count, np_result** out) {
  return guard([&] {
    need(out, "out");
    auto r = std::make_unique<np_result>();
    r->kind = "oracle_annulus";
    r->scalar("inner_radius", inner_radius);
    r->vec("sigma", oracle::collocation_annulus(inner_radius, count));
    r->scalar("sigma0_exact", 1 / std::log(1 / inner_radius));
    *out = r.release();
  });
}

np_status np_oracle_circles(const np_scene* s, int target, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    if (s->s.domain.kind != DomainKind::DiskInterior || s->s.targets.empty() || !s->s.patches.empty())
      throw Error(ErrorCode::Unsupported, "circle oracle needs disk targets inside the unit disk");
    std::vector<oracle::Circle> holes;
    bool steklov = false;
    for (const auto& t : s->s.targets) {
      if (t.shape != TargetShape::Disk) throw Error(ErrorCode::Unsupported, "circle oracle needs disk targets");
      holes.push_back({t.center, t.size, t.bc});
      steklov |= t.bc == Bc::Steklov;
    }
    auto r = std::make_unique<np_result>();
    if (steklov) {
      r->kind = "oracle_circles_steklov";
      r->scalar("sigma0", oracle::collocation_circles_steklov(holes));
    } else {
      r->kind = "oracle_circles_splitting";
      r->scalar("target", target);
      r->scalar("chi", oracle::collocation_circles_splitting(holes, target));
    }
    *out = r.release();
  });
}

static std::vector<Vec2> starts(const double* xy, size_t n) {
  std::vector<Vec2> v;
  if (n > 0) need(xy, "start_xy");
  for (size_t i = 0; i < n; ++i) v.push_back({xy[2 * i], xy[2 * i + 1]});
  return v;
}

np_status np_mc_splitting(const np_scene* s, int target, const double* start_xy, size_t n_start,
                          unsigned long long walkers, unsigned long long seed, double dt_max, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    oracle::McConfig cfg;
    if (walkers > 0) cfg.walkers = walkers;
    cfg.seed = seed;
    if (dt_max > 0) cfg.dt_max = dt_max;
    auto e = oracle::mc_splitting(s->s, target, starts(start_xy, n_start), cfg);
    auto r = std::make_unique<np_result>();
    r->kind = "mc_splitting";
    r->scalar("target", target);
    r->scalar("mean", e.mean);
    r->scalar("stderr", e.stderr_);
    r->scalar("samples", static_cast<double>(e.samples));
    *out = r.release();
  });
}

np_status np_mc_mfpt(const np_scene* s, const double* start_xy, size_t n_start, unsigned long long walkers,
                     unsigned long long seed, double dt_max, np_result** out) {
  return guard([&] {
    need(s, "scene");
    need(out, "out");
    oracle::McConfig cfg;
    if (walkers > 0) cfg.walkers = walkers;
    cfg.seed = seed;
    if (dt_max > 0) cfg.dt_max = dt_max;
    auto e = oracle::mc_mfpt(s->s, starts(start_xy, n_start), cfg);
    auto r = std::make_unique<np_result>();
    r->kind = "mc_mfpt";
    r->scalar("mean", e.mean);
    r->scalar("stderr", e.stderr_);
    r->scalar("samples", static_cast<double>(e.samples));
    *out = r.release();
  });
}

np_status np_result_scalar(const np_result* r, const char* key, double* out) {
  return guard([&] {
    need(r, "result");
    need(key, "key");
    need(out, "out");
    for (const auto& [k, v] : r->scalars)
      if (k == key) {
        *out = v;
        return;
      }
    throw Error(ErrorCode::InvalidArgument, std::string("no scalar named ") + key);
  });
}

np_status np_result_vector(const np_result* r, const char* key, const double** data, size_t* n) {
  return guard([&] {
    need(r, "result");
    need(key, "key");
    need(data, "data");
    need(n, "n");
    for (const auto& [k, v] : r->vectors)
      if (k == key) {
        *data = v.data();
        *n = v.size();
        return;
      }
    throw Error(ErrorCode::InvalidArgument, std::string("no vector named ") + key);
  });
}

size_t np_result_warning_count(const np_result* r) { return r ? r->warnings.size() : 0; }

const char* np_result_warning(const np_result* r, size_t i) {
  if (!r || i >= r->warnings.size()) return nullptr;
  return r->warnings[i].c_str();
}

int np_result_has_field(const np_result* r) { return r && r->field ? 1 : 0; }

static double eval_one(const np_result* r, Vec2 x, bool cap) {
  if (!inside(r->scene, x)) return std::numeric_limits<double>::quiet_NaN();
  double v;
  try {
    v = r->field(x);
  } catch (const Error& e) {
    // a grid node on a source point
    if (e.code() != ErrorCode::Singularity) throw;
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (cap && r->cappable) v = std::clamp(v, 0.0, 1.0);
  return v;
}

np_status np_result_eval(const np_result* r, double x, double y, int cap, double* out) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    if (!r->field) throw Error(ErrorCode::Unsupported, "this result has no field");
    *out = eval_one(r, {x, y}, cap != 0);
  });
}

np_status np_result_eval_grid(const np_result* r, double x0, double x1, double y0, double y1, int nx, int ny, int cap,
                              double* out) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    if (!r->field) throw Error(ErrorCode::Unsupported, "this result has no field");
    if (nx < 2 || ny < 2) throw Error(ErrorCode::InvalidArgument, "grid needs nx, ny >= 2");
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        Vec2 x{x0 + (x1 - x0) * i / (nx - 1), y0 + (y1 - y0) * j / (ny - 1)};
        out[static_cast<size_t>(j) * nx + i] = eval_one(r, x, cap != 0);
      }
  });
}

np_status np_result_to_json(const np_result* r, char** out) {
  return guard([&] {
    need(r, "result");
    need(out, "out");
    nlohmann::ordered_json j;
    j["kind"] = r->kind;
    for (const auto& [k, v] : r->scalars) j[k] = sig12(v);
    for (const auto& [k, v] : r->vectors) {
      nlohmann::ordered_json a = nlohmann::ordered_json::array();
      for (double x : v) a.push_back(sig12(x));
      j[k] = a;
    }
    j["warnings"] = r->warnings;
    j["units"] = "dimensionless; lengths in unit-disk (or semiaxis) units, unit diffusivity";
    *out = dup(j.dump(2));
  });
}

void np_result_free(np_result* r) { delete r; }

}  // extern "C"
