#include "narrowpatch/extensions.hpp"

#include <numbers>
#include <sstream>

namespace narrowpatch::ext {

using std::numbers::pi;

double c_exterior_disk(double mu) {
  if (mu == 0) throw Error(ErrorCode::Pole, "C_disk(mu) has a pole at mu = 0");
  return 1 / mu;
}

double target_nu(const InteriorTarget& t) {
  switch (t.bc) {
    case Bc::Dirichlet:
    case Bc::Steklov:
      return -1 / std::log(t.size * t.capacity);
    case Bc::Robin:
      if (t.shape != TargetShape::Disk)
        throw Error(ErrorCode::Unsupported, "Robin interior targets are supported for disk shapes only");
      return 1 / (-std::log(t.size) + c_exterior_disk(t.size * t.q));
  }
  throw Error(ErrorCode::Internal, "unknown boundary condition");
}

std::vector<std::string> check_targets(const Domain& d, const std::vector<InteriorTarget>& targets) {
  if (!d.interior()) throw Error(ErrorCode::Unsupported, "interior targets need a bounded (interior) domain");
  Scene s;
  s.domain = d;
  s.targets = targets;
  s.validate();
  std::vector<std::string> w;
  for (size_t i = 0; i < targets.size(); ++i) {
    double c = d.boundary_distance(targets[i].center);
    std::ostringstream os;
    if (c < 2 * targets[i].size) {
      os << "target " << i << ": clearance " << c << " from the boundary is below 2 eps";
      throw Error(ErrorCode::Domain, os.str());
    }
    if (c < kClearanceWarn) {
      os << "target " << i << ": clearance " << c << " from the boundary is small; bulk asymptotics degrade";
      w.push_back(os.str());
    }
  }
  return w;
}

capture::SplittingSolution interior_splitting(const Domain& d, const std::vector<InteriorTarget>& targets, int k) {
  std::vector<std::string> w = check_targets(d, targets);
  const int n = static_cast<int>(targets.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "no interior targets");
  Eigen::VectorXd nu(n);
  std::vector<Vec2> centers;
  for (int j = 0; j < n; ++j) {
    if (targets[j].bc == Bc::Steklov)
      throw Error(ErrorCode::InvalidArgument, "Steklov targets belong to the spectral solvers");
    nu(j) = target_nu(targets[j]);
    std::ostringstream os;
    if (!(nu(j) > 0) || !(nu(j) < capture::kNuBound)) {
      os << "target " << j << ": nu = " << nu(j) << " outside the admissible range";
      throw Error(ErrorCode::Inadmissible, os.str());
    }
    if (nu(j) > capture::kNuWarn) {
      os << "target " << j << ": nu = " << nu(j) << " above " << capture::kNuWarn;
      w.push_back(os.str());
    }
    centers.push_back(targets[j].center);
  }
  greens::GreenMatrix gm = greens::bulk_green_matrix(d, centers);
  capture::SplittingSolution sol = capture::splitting_from_system(gm.G, nu, k);
  sol.src.domain = d;
  sol.src.mode = greens::GreenMode::Bulk;
  sol.src.scale = gm.scale;
  sol.src.xy = centers;
  for (const auto& t : targets) sol.src.eps.push_back(t.size);
  sol.warnings.insert(sol.warnings.begin(), w.begin(), w.end());
  return sol;
}

InteriorSnd interior_snd_principal(const Domain& d, const InteriorTarget& steklov, const InteriorTarget& dirichlet) {
  if (steklov.shape != TargetShape::Disk)
    throw Error(ErrorCode::Unsupported, "the Steklov target must be a disk (C(mu) = 1/mu)");
  if (steklov.bc != Bc::Steklov || dirichlet.bc != Bc::Dirichlet)
    throw Error(ErrorCode::InvalidArgument, "expected one Steklov target and one Dirichlet target");
  InteriorSnd r;
  r.warnings = check_targets(d, {steklov, dirichlet});
  Vec2 x1 = steklov.center, x2 = dirichlet.center;
  double s = greens::bulk_regular_part(d, x1) + greens::bulk_regular_part(d, x2) - 2 * greens::bulk_green(d, x1, x2);
  r.C = std::log(dirichlet.capacity * steklov.size * dirichlet.size) - 2 * pi * s;
  r.inv_eps_sigma0 = -r.C;
  if (!(r.inv_eps_sigma0 > 0)) throw Error(ErrorCode::Inadmissible, "principal eigenvalue is not positive");
  r.sigma0 = 1 / (steklov.size * r.inv_eps_sigma0);
  return r;
}

greens::GreenMatrix exterior_scene_support(const Scene& s) {
  if (s.domain.interior()) throw Error(ErrorCode::InvalidArgument, "exterior_scene_support needs an exterior domain");
  s.validate();
  return greens::green_matrix(s.domain, s.centers(), s.half_lengths());
}

}  // namespace narrowpatch::ext
