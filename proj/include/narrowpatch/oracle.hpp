#pragma once
// Independent reference solvers on the unit disk: a boundary-integral solver
// for mixed Dirichlet/Robin/Steklov/Neumann problems, Fourier solvers for
// concentric and multi-circle geometries, and a reflected random walk.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "narrowpatch/scene.hpp"

namespace narrowpatch::oracle {

struct CollocationConfig {
  int nodes_per_patch = 48;  // Chebyshev nodes on each patch
  int harmonics = 64;        // Fourier order for circle geometries
  double ridge = 1e-12;      // reciprocal condition floor
};

// Patch unknowns: the boundary flux on patch j is w_j(t)/sqrt(1 - t^2),
// t in [-1, 1] the scaled arc coordinate, with w_j sampled at Chebyshev nodes.
class DiskBoundarySolver {
 public:
  DiskBoundarySolver(std::vector<Patch> patches, int nodes);
  int nodes() const { return P_; }
  int patch_count() const { return static_cast<int>(patches_.size()); }
  const std::vector<Patch>& patches() const { return patches_; }
  const std::vector<double>& t() const { return t_; }
  // u - ubar at every node of every patch, as a linear map of all w.
  const Eigen::MatrixXd& L() const { return L_; }
  // Row of the same map for patch i at local coordinate s.
  Eigen::RowVectorXd boundary_row(int i, double s) const;
  // u(x) - ubar for the flux w at a point of the closed disk.
  double potential(const Eigen::VectorXd& w, Vec2 x) const;
  // Total flux weights: sum f_k w_k = integral of the flux.
  const Eigen::RowVectorXd& flux() const { return f_; }

 private:
  std::vector<Patch> patches_;
  int P_;
  std::vector<double> t_;
  Eigen::MatrixXd L_;
  Eigen::RowVectorXd f_;
};

struct Field {
  double mean = 0;  // boundary average, equal to the area average
  Eigen::VectorXd w;
  std::shared_ptr<const DiskBoundarySolver> solver;
  std::function<double(Vec2)> extra;  // particular solution added to the harmonic part, may be empty
  double operator()(Vec2 x) const;
};

// Dirichlet and Robin patches on the unit disk; chi_k is the mean of S_k.
struct CollocationSplitting {
  double chi = 0;
  Field field;
};
CollocationSplitting collocation_splitting(const Scene& s, int k, const CollocationConfig& cfg = {});

// Mean first-reaction time with unit diffusivity.
struct CollocationMfrt {
  double ubar = 0;
  Field field;
};
CollocationMfrt collocation_mfrt(const Scene& s, const CollocationConfig& cfg = {});

// Eigenvalues (ascending, sigma_0 first) and traces of the Steklov patches.
// Layouts: all Steklov (sigma_0 = 0 included), or Steklov plus Dirichlet patches.
struct CollocationSteklov {
  std::vector<double> sigma;
  // trace(j, i, s): eigenfunction j on Steklov patch i at local s, normalized
  // so that sum_i eps_i int u^2 ds = 1 over the Steklov patches.
  std::function<double(int, int, double)> trace;
  std::vector<int> steklov_patches;
};
CollocationSteklov collocation_steklov(const Scene& s, int J, const CollocationConfig& cfg = {});

// Whole unit circle Steklov: eigenvalues and the trace coefficients in the
// Fourier basis, projection residual of each trace against cos/sin(k theta).
struct WholeDiskSteklov {
  std::vector<double> sigma;
  std::vector<double> residual;
};
WholeDiskSteklov collocation_whole_disk(int J, const CollocationConfig& cfg = {});

// Annulus inner_radius < r < 1: Steklov on r = 1, Dirichlet on the inner circle.
std::vector<double> collocation_annulus(double inner_radius, int J, const CollocationConfig& cfg = {});

// Circular holes inside the unit disk (Neumann on the outer circle).
struct Circle {
  Vec2 center;
  double radius;
  Bc bc = Bc::Dirichlet;
};
// Splitting probability of hole k among Dirichlet holes, averaged over the domain.
double collocation_circles_splitting(const std::vector<Circle>& holes, int k, const CollocationConfig& cfg = {});
// Principal eigenvalue for one Steklov hole among Dirichlet holes.
double collocation_circles_steklov(const std::vector<Circle>& holes, const CollocationConfig& cfg = {});

struct McConfig {
  std::uint64_t walkers = 100000;
  std::uint64_t seed = 12345;
  double dt_max = 2e-3;
  double dt_min = 1e-8;
  double step_factor = 1.0 / 16;  // dt = factor * d^2, d the distance to the nearest arc end or disk
  std::uint64_t max_steps = 20000000;
  double time_limit = 600;  // seconds, whole run
  int threads = 0;          // 0: hardware concurrency
};

struct Estimate {
  double mean = 0, stderr_ = 0;
  std::uint64_t samples = 0;
};

// Start at a point, or uniformly over the disk when start is empty (stratified
// over 20 equal-area cells). Absorbers are Dirichlet patches and Dirichlet
// interior disk targets of the scene.
Estimate mc_splitting(const Scene& s, int k, const std::vector<Vec2>& start, const McConfig& cfg = {});
Estimate mc_mfpt(const Scene& s, const std::vector<Vec2>& start, const McConfig& cfg = {});

// The 20 cell centers used for the stratified uniform start.
std::vector<Vec2> stratified_points();

}  // namespace narrowpatch::oracle
