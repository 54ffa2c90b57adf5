#include "narrowpatch/scene.hpp"

#include <numbers>
#include <sstream>

namespace narrowpatch {

const char* bc_name(Bc b) {
  switch (b) {
    case Bc::Dirichlet: return "dirichlet";
    case Bc::Robin: return "robin";
    case Bc::Steklov: return "steklov";
  }
  return "?";
}

void Scene::validate() const {
  domain.validate();
  const double perim = domain.perimeter();
  for (size_t i = 0; i < patches.size(); ++i) {
    const Patch& p = patches[i];
    std::ostringstream os;
    os << "patch " << i << ": ";
    if (!(p.half_length > 0) || !std::isfinite(p.half_length))
      throw Error(ErrorCode::InvalidArgument, os.str() + "half_length must be positive");
    if (2 * p.half_length >= perim) throw Error(ErrorCode::InvalidArgument, os.str() + "patch covers the boundary");
    if (!std::isfinite(p.center)) throw Error(ErrorCode::InvalidArgument, os.str() + "center must be finite");
    if (p.bc == Bc::Robin && !(p.q > 0 && std::isfinite(p.q)))
      throw Error(ErrorCode::InvalidArgument, os.str() + "Robin reactivity q must be in (0, inf)");
  }
  for (size_t i = 0; i < patches.size(); ++i)
    for (size_t j = i + 1; j < patches.size(); ++j) {
      double s = domain.arc_distance(patches[i].center, patches[j].center);
      if (s <= patches[i].half_length + patches[j].half_length) {
        std::ostringstream os;
        os << "patches " << i << " and " << j << " overlap";
        throw Error(ErrorCode::Overlap, os.str());
      }
    }
  for (size_t i = 0; i < targets.size(); ++i) {
    const InteriorTarget& t = targets[i];
    std::ostringstream os;
    os << "target " << i << ": ";
    if (!(t.size > 0)) throw Error(ErrorCode::InvalidArgument, os.str() + "size must be positive");
    if (!(t.capacity > 0)) throw Error(ErrorCode::InvalidArgument, os.str() + "capacity must be positive");
    if (t.bc == Bc::Robin && !(t.q > 0 && std::isfinite(t.q)))
      throw Error(ErrorCode::InvalidArgument, os.str() + "Robin reactivity q must be in (0, inf)");
    if (!domain.contains(t.center, 0)) throw Error(ErrorCode::Domain, os.str() + "center outside the domain");
    if (domain.boundary_distance(t.center) <= t.size)
      throw Error(ErrorCode::Domain, os.str() + "target intersects the boundary");
    for (size_t j = i + 1; j < targets.size(); ++j)
      if (norm(targets[j].center - t.center) <= t.size + targets[j].size) {
        std::ostringstream o2;
        o2 << "targets " << i << " and " << j << " overlap";
        throw Error(ErrorCode::Overlap, o2.str());
      }
  }
}

std::vector<double> Scene::centers() const {
  std::vector<double> c;
  for (const auto& p : patches) c.push_back(p.center);
  return c;
}

std::vector<double> Scene::half_lengths() const {
  std::vector<double> c;
  for (const auto& p : patches) c.push_back(p.half_length);
  return c;
}

}  // namespace narrowpatch
