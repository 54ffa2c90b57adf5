// npatch: command-line front end over the C interface.
//
// Every command writes a JSON run report (command echo, input digest,
// outputs, warnings, timing) to stdout or --out. On failure the report holds
// an "error" object and the exit status is the library status code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "narrowpatch/narrowpatch.h"

using ojson = nlohmann::ordered_json;

namespace {

struct Failure {
  np_status status;
  std::string message;
};

void check(np_status s) {
  if (s != NP_OK) throw Failure{s, np_last_error()};
}

struct SceneH {
  np_scene* p = nullptr;
  ~SceneH() { np_scene_free(p); }
};
struct BasisH {
  np_basis* p = nullptr;
  ~BasisH() { np_basis_free(p); }
};
struct ResultH {
  np_result* p = nullptr;
  ~ResultH() { np_result_free(p); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{NP_ERR_IO, "cannot open " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// FNV-1a, 64 bit
std::string digest(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ojson result_json(const np_result* r) {
  char* s = nullptr;
  check(np_result_to_json(r, &s));
  ojson j = ojson::parse(s);
  np_string_free(s);
  // patch and target indices are 1-based on the command line
  for (const char* k : {"target", "steklov_patch"})
    if (j.contains(k)) j[k] = j[k].get<int>() + 1;
  return j;
}

void load(SceneH& h, const std::string& path) { check(np_scene_load(path.c_str(), &h.p)); }

void write_grid(const np_scene* sc, const np_result* r, int nx, int ny, bool cap, const std::string& path) {
  double x0, x1, y0, y1;
  check(np_scene_bbox(sc, &x0, &x1, &y0, &y1));
  std::vector<double> v(static_cast<size_t>(nx) * ny);
  check(np_result_eval_grid(r, x0, x1, y0, y1, nx, ny, cap ? 1 : 0, v.data()));
  std::ofstream out(path);
  if (!out) throw Failure{NP_ERR_IO, "cannot write " + path};
  out << "x,y,value\n";
  char buf[128];
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double x = x0 + (x1 - x0) * i / (nx - 1), y = y0 + (y1 - y0) * j / (ny - 1);
      double f = v[static_cast<size_t>(j) * nx + i];
      if (std::isnan(f))
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,\n", x, y);
      else
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", x, y, f);
      out << buf;
    }
}

struct GridOpt {
  std::vector<int> grid;
  std::string csv = "field.csv";
  bool no_cap = false;
  void add(CLI::App* app, bool cappable) {
    app->add_option("--grid", grid, "emit an NX x NY field CSV over the bounding box")->expected(2);
    app->add_option("--csv", csv, "CSV path for --grid");
    if (cappable) app->add_flag("--no-cap", no_cap, "do not clamp probabilities to [0, 1]");
  }
  void emit(const np_scene* sc, const np_result* r, ojson& out) const {
    if (grid.empty()) return;
    if (grid[0] < 2 || grid[1] < 2) throw Failure{NP_ERR_INVALID_ARGUMENT, "--grid needs NX, NY >= 2"};
    write_grid(sc, r, grid[0], grid[1], !no_cap, csv);
    out["grid_csv"] = csv;
  }
};

int to_index(int one_based) {
  if (one_based < 1) throw Failure{NP_ERR_INVALID_ARGUMENT, "indices are 1-based"};
  return one_based - 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matched-asymptotic small-target diffusion solvers"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  std::string cache_dir;
  app.add_option("--cache-dir", cache_dir, "basis cache directory (default $NARROWPATCH_CACHE_DIR)");
  int basis_K = 101, basis_M = 400;
  app.add_option("--basis-K", basis_K, "interval Steklov modes used by snd roots and cfun");
  app.add_option("--basis-M", basis_M, "interval Steklov truncation");

  std::string scene_path;
  int target = 1;

  auto* splitting = app.add_subcommand("splitting", "splitting probabilities for boundary patches");
  splitting->add_option("--scene", scene_path)->required();
  splitting->add_option("--target", target, "1-based patch index")->required();
  GridOpt g_split;
  g_split.add(splitting, true);

  auto* mfrt = app.add_subcommand("mfrt", "mean first-reaction time");
  mfrt->add_option("--scene", scene_path)->required();
  GridOpt g_mfrt;
  g_mfrt.add(mfrt, false);

  auto* sn = app.add_subcommand("sn", "Steklov-Neumann spectrum for Steklov patches");
  sn->add_option("--scene", scene_path)->required();

  auto* snd = app.add_subcommand("snd", "one Steklov patch among Dirichlet patches");
  snd->add_option("--scene", scene_path);
  int roots = 6;
  snd->add_option("--roots", roots, "number of roots of C(-mu) = C");
  int eq_N = 0;
  double eq_eps = 0, eq_l1 = 2, a_emp = 1.25;
  std::string eq_mode = "all";
  snd->add_option("--equally-spaced", eq_N, "N equally spaced patches on the unit disk instead of a scene");
  snd->add_option("--eps", eq_eps, "Dirichlet half-length for --equally-spaced");
  snd->add_option("--l1", eq_l1, "Steklov length ratio, eps1 = l1 eps / 2");
  snd->add_option("--mode", eq_mode)->check(CLI::IsMember({"discrete", "largeN", "loworder", "all"}));
  snd->add_option("--a", a_emp, "empirical kappa coefficient");

  auto* basis = app.add_subcommand("basis", "interval Steklov eigenvalues and far-field values");
  int K = 21, M = 100, taylor = 2;
  std::string save_path;
  basis->add_option("--K", K);
  basis->add_option("--M", M);
  basis->add_option("--taylor", taylor, "number of Taylor coefficients of C(mu)");
  basis->add_option("--save", save_path, "write the binary basis file");

  auto* cfun = app.add_subcommand("cfun", "constant term C(mu)");
  std::vector<double> mus;
  int even_modes = -1;
  bool no_tail = false, ext_disk = false;
  cfun->add_option("--mu", mus, "values of mu")->required();
  cfun->add_option("--even-modes", even_modes, "retained even modes (default all)");
  cfun->add_flag("--no-tail", no_tail, "drop the large-k tail correction");
  cfun->add_flag("--exterior-disk", ext_disk, "use C(mu) = 1/mu of a disk target");

  auto* kappa = app.add_subcommand("kappa", "circulant eigenvalues and their asymptotic forms");
  int kN = 16;
  std::string k_mode = "all";
  kappa->add_option("--N", kN)->required();
  kappa->add_option("--mode", k_mode)->check(CLI::IsMember({"exact", "full", "cubic", "loworder", "empirical", "all"}));
  kappa->add_option("--a", a_emp);

  auto* interior = app.add_subcommand("interior", "interior targets");
  interior->add_option("--scene", scene_path)->required();
  interior->add_option("--target", target, "1-based target index");
  bool int_snd = false;
  interior->add_flag("--snd", int_snd, "principal eigenvalue for a Steklov and a Dirichlet target");
  GridOpt g_int;
  g_int.add(interior, true);

  auto* exterior = app.add_subcommand("exterior", "patches on the boundary of an obstacle");
  exterior->add_option("--scene", scene_path)->required();
  exterior->add_option("--target", target, "1-based patch index (splitting)");
  bool ext_sn = false;
  exterior->add_flag("--sn", ext_sn, "Steklov-Neumann spectrum instead of splitting");

  auto* orc = app.add_subcommand("oracle", "reference solvers on the unit disk");
  orc->require_subcommand(1);
  int nodes = 0, count = 6;
  unsigned long long walkers = 100000, seed = 12345;
  double dt_max = 0, inner = 0.05;
  std::vector<double> start;
  auto* o_split = orc->add_subcommand("splitting", "boundary-integral splitting probability");
  o_split->add_option("--scene", scene_path)->required();
  o_split->add_option("--target", target)->required();
  o_split->add_option("--nodes", nodes, "Chebyshev nodes per patch");
  GridOpt g_osplit;
  g_osplit.add(o_split, true);
  auto* o_mfrt = orc->add_subcommand("mfrt", "boundary-integral mean first-reaction time");
  o_mfrt->add_option("--scene", scene_path)->required();
  o_mfrt->add_option("--nodes", nodes);
  auto* o_stek = orc->add_subcommand("steklov", "boundary-integral Steklov eigenvalues");
  o_stek->add_option("--scene", scene_path)->required();
  o_stek->add_option("--count", count);
  o_stek->add_option("--nodes", nodes);
  auto* o_ann = orc->add_subcommand("annulus", "annulus with Steklov outer and Dirichlet inner circle");
  o_ann->add_option("--inner", inner)->required();
  o_ann->add_option("--count", count);
  auto* o_circ = orc->add_subcommand("circles", "disk targets inside the unit disk");
  o_circ->add_option("--scene", scene_path)->required();
  o_circ->add_option("--target", target);
  auto* o_mcs = orc->add_subcommand("mc-splitting", "random-walk splitting probability");
  auto* o_mcm = orc->add_subcommand("mc-mfpt", "random-walk mean first-passage time");
  for (auto* c : {o_mcs, o_mcm}) {
    c->add_option("--scene", scene_path)->required();
    c->add_option("--walkers", walkers);
    c->add_option("--seed", seed);
    c->add_option("--dt-max", dt_max);
    c->add_option("--start", start, "start point x y (default: uniform over the disk)")->expected(2);
  }
  o_mcs->add_option("--target", target)->required();

  CLI11_PARSE(app, argc, argv);

  ojson report;
  std::vector<std::string> cmd(argv, argv + argc);
  report["command"] = cmd;
  auto t0 = std::chrono::steady_clock::now();
  int status = 0;
  try {
    std::string inputs;
    for (int i = 1; i < argc; ++i) inputs += std::string(argv[i]) + '\n';
    if (!scene_path.empty()) inputs += read_file(scene_path);
    report["inputs_digest"] = digest(inputs);

    SceneH sc;
    ResultH r;
    ojson outputs;
    auto basis_handle = [&](BasisH& b) {
      check(np_basis_build(basis_K, basis_M, cache_dir.empty() ? nullptr : cache_dir.c_str(), &b.p));
    };

    if (*splitting) {
      load(sc, scene_path);
      check(np_splitting(sc.p, nullptr, to_index(target), &r.p));
      outputs = result_json(r.p);
      g_split.emit(sc.p, r.p, outputs);
    } else if (*mfrt) {
      load(sc, scene_path);
      check(np_mfrt(sc.p, nullptr, &r.p));
      outputs = result_json(r.p);
      g_mfrt.emit(sc.p, r.p, outputs);
    } else if (*sn) {
      load(sc, scene_path);
      check(np_sn_spectrum(sc.p, nullptr, &r.p));
      outputs = result_json(r.p);
    } else if (*snd) {
      if (eq_N > 0) {
        outputs["kind"] = "snd_equally_spaced";
        outputs["N"] = eq_N;
        outputs["eps"] = eq_eps;
        outputs["l1"] = eq_l1;
        const char* names[] = {"discrete", "largeN", "loworder"};
        for (int m = 0; m < 3; ++m) {
          if (eq_mode != "all" && eq_mode != names[m]) continue;
          double v;
          check(np_snd_equally_spaced(eq_N, eq_eps, eq_l1, m, a_emp, &v));
          outputs[std::string("inv_eps_sigma0_") + names[m]] = v;
        }
      } else {
        if (scene_path.empty()) throw Failure{NP_ERR_INVALID_ARGUMENT, "snd needs --scene or --equally-spaced"};
        load(sc, scene_path);
        BasisH b;
        if (roots > 0) basis_handle(b);
        check(np_snd(sc.p, b.p, roots, &r.p));
        outputs = result_json(r.p);
      }
    } else if (*basis) {
      BasisH b;
      check(np_basis_build(K, M, cache_dir.empty() ? nullptr : cache_dir.c_str(), &b.p));
      if (!save_path.empty()) check(np_basis_save(b.p, save_path.c_str()));
      check(np_basis_table(b.p, taylor, &r.p));
      outputs = result_json(r.p);
    } else if (*cfun) {
      outputs["kind"] = "cfun";
      ojson vals = ojson::array();
      if (ext_disk) {
        for (double mu : mus) {
          double v;
          check(np_cfun_exterior_disk(mu, &v));
          vals.push_back({{"mu", mu}, {"C", v}});
        }
      } else {
        BasisH b;
        basis_handle(b);
        for (double mu : mus) {
          double v;
          check(np_cfun(b.p, mu, even_modes, no_tail ? 0 : 1, &v));
          vals.push_back({{"mu", mu}, {"C", v}});
        }
      }
      outputs["values"] = vals;
    } else if (*kappa) {
      check(np_kappa_table(kN, a_emp, &r.p));
      outputs = result_json(r.p);
      if (k_mode != "all")
        for (const char* m : {"exact", "full", "cubic", "loworder", "empirical"})
          if (k_mode != m) outputs.erase(m);
    } else if (*interior) {
      load(sc, scene_path);
      if (int_snd) {
        check(np_interior_snd(sc.p, &r.p));
        outputs = result_json(r.p);
      } else {
        check(np_interior_splitting(sc.p, to_index(target), &r.p));
        outputs = result_json(r.p);
        g_int.emit(sc.p, r.p, outputs);
      }
    } else if (*exterior) {
      load(sc, scene_path);
      if (ext_sn)
        check(np_sn_spectrum(sc.p, nullptr, &r.p));
      else
        check(np_splitting(sc.p, nullptr, to_index(target), &r.p));
      outputs = result_json(r.p);
      ResultH gm;
      check(np_green_matrix(sc.p, &gm.p));
      outputs["green_matrix"] = result_json(gm.p);
    } else if (*orc) {
      if (*o_ann) {
        check(np_oracle_annulus(inner, count, &r.p));
      } else {
        load(sc, scene_path);
        if (*o_split)
          check(np_oracle_splitting(sc.p, to_index(target), nodes, &r.p));
        else if (*o_mfrt)
          check(np_oracle_mfrt(sc.p, nodes, &r.p));
        else if (*o_stek)
          check(np_oracle_steklov(sc.p, count, nodes, &r.p));
        else if (*o_circ)
          check(np_oracle_circles(sc.p, to_index(target), &r.p));
        else if (*o_mcs)
          check(np_mc_splitting(sc.p, to_index(target), start.data(), start.size() / 2, walkers, seed, dt_max, &r.p));
        else
          check(np_mc_mfpt(sc.p, start.data(), start.size() / 2, walkers, seed, dt_max, &r.p));
      }
      outputs = result_json(r.p);
      if (*o_split) g_osplit.emit(sc.p, r.p, outputs);
    }
    ojson warnings = ojson::array();
    if (outputs.contains("warnings")) {
      warnings = outputs["warnings"];
      outputs.erase("warnings");
    }
    report["outputs"] = outputs;
    report["warnings"] = warnings;
  } catch (const Failure& f) {
    report["error"] = {{"status", static_cast<int>(f.status)}, {"code", np_status_name(f.status)}, {"message", f.message}};
    status = static_cast<int>(f.status);
  }
  report["timing_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    f << text;
  }
  if (status != 0) std::cerr << "error (" << np_status_name(static_cast<np_status>(status)) << "): " << report["error"]["message"].get<std::string>() << "\n";
  return status;
}
