#pragma once
// Interior (bulk) targets, the exterior-of-a-disk C function, and exterior
// boundary-patch scenes.

#include <string>
#include <vector>

#include "narrowpatch/capture.hpp"
#include "narrowpatch/greens.hpp"
#include "narrowpatch/scene.hpp"

namespace narrowpatch::ext {

inline constexpr double kClearanceWarn = 0.2;

// C(mu) for a disk-shaped target, exact.
double c_exterior_disk(double mu);

// nu_j = -1/ln(eps d) (Dirichlet) or 1/(-ln eps + C_disk(eps q)) (Robin, disk targets).
double target_nu(const InteriorTarget& t);

// Clearance and overlap checks; returns warnings.
std::vector<std::string> check_targets(const Domain& d, const std::vector<InteriorTarget>& targets);

capture::SplittingSolution interior_splitting(const Domain& d, const std::vector<InteriorTarget>& targets, int k);

struct InteriorSnd {
  double C = 0;
  double inv_eps_sigma0 = 0;
  double sigma0 = 0;
  std::vector<std::string> warnings;
};
InteriorSnd interior_snd_principal(const Domain& d, const InteriorTarget& steklov, const InteriorTarget& dirichlet);

// Green matrix of an exterior scene; the capture and Steklov solvers accept
// exterior scenes directly, this exposes the matrix they use.
greens::GreenMatrix exterior_scene_support(const Scene& s);

}  // namespace narrowpatch::ext
