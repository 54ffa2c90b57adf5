#pragma once
// Patches on the boundary, interior targets, and the scene that holds them.

#include <vector>

#include "narrowpatch/core.hpp"

namespace narrowpatch {

enum class Bc { Dirichlet, Robin, Steklov };
const char* bc_name(Bc b);

struct Patch {
  double center = 0;       // boundary parameter t
  double half_length = 0;  // eps, arc length
  Bc bc = Bc::Dirichlet;
  double q = 0;            // Robin reactivity
};

enum class TargetShape { Disk, Custom };

struct InteriorTarget {
  Vec2 center;
  double size = 0;  // eps; radius for a disk target
  TargetShape shape = TargetShape::Disk;
  double capacity = 1;  // logarithmic capacity d of the unit-size shape
  Bc bc = Bc::Dirichlet;
  double q = 0;
};

struct Scene {
  Domain domain;
  std::vector<Patch> patches;
  std::vector<InteriorTarget> targets;

  // Throws Domain/Overlap/InvalidArgument errors; arcs must be disjoint.
  void validate() const;
  std::vector<double> centers() const;
  std::vector<double> half_lengths() const;
};

}  // namespace narrowpatch
