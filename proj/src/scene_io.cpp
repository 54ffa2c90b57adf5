#include "narrowpatch/scene_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace narrowpatch {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::Schema, path + ": " + msg);
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) schema(path, "expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) schema(path + "." + it.key(), "unknown key");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) schema(path, "expected a finite number");
  return v;
}

Vec2 pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema(path, "expected [x, y]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

Bc parse_bc(const json& j, const std::string& path, double& q) {
  only_keys(j, path, {"type", "q"});
  if (!j.contains("type") || !j["type"].is_string()) schema(path + ".type", "expected a string");
  std::string t = j["type"].get<std::string>();
  Bc bc;
  if (t == "dirichlet")
    bc = Bc::Dirichlet;
  else if (t == "robin")
    bc = Bc::Robin;
  else if (t == "steklov")
    bc = Bc::Steklov;
  else
    schema(path + ".type", "unknown boundary condition '" + t + "'");
  q = 0;
  if (bc == Bc::Robin) {
    if (!j.contains("q")) schema(path + ".q", "Robin condition needs q");
    q = number(j["q"], path + ".q");
  } else if (j.contains("q")) {
    schema(path + ".q", "q applies to Robin conditions only");
  }
  return bc;
}

json bc_json(Bc bc, double q) {
  json j{{"type", bc_name(bc)}};
  if (bc == Bc::Robin) j["q"] = q;
  return j;
}

}  // namespace

DomainKind parse_domain_kind(const std::string& name) {
  for (DomainKind k : {DomainKind::DiskInterior, DomainKind::DiskExterior, DomainKind::EllipseInterior,
                       DomainKind::EllipseExterior})
    if (name == domain_kind_name(k)) return k;
  throw Error(ErrorCode::Schema, "unknown domain kind '" + name + "'");
}

Scene parse_scene(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("$: invalid JSON: ") + e.what());
  }
  only_keys(root, "$", {"version", "domain", "patches", "targets"});
  if (root.contains("version")) {
    if (!root["version"].is_number_integer() || root["version"].get<int>() != kSceneVersion)
      schema("$.version", "unsupported scene version");
  }
  if (!root.contains("domain")) schema("$.domain", "missing");
  const json& jd = root["domain"];
  only_keys(jd, "$.domain", {"kind", "a", "b"});
  if (!jd.contains("kind") || !jd["kind"].is_string()) schema("$.domain.kind", "expected a string");
  Scene s;
  try {
    s.domain.kind = parse_domain_kind(jd["kind"].get<std::string>());
  } catch (const Error& e) {
    schema("$.domain.kind", e.what());
  }
  if (s.domain.is_disk()) {
    for (const char* k : {"a", "b"})
      if (jd.contains(k) && number(jd[k], std::string("$.domain.") + k) != 1)
        schema(std::string("$.domain.") + k, "disk kinds have unit radius");
  } else {
    if (!jd.contains("a") || !jd.contains("b")) schema("$.domain", "ellipse kinds need a and b");
    s.domain.a = number(jd["a"], "$.domain.a");
    s.domain.b = number(jd["b"], "$.domain.b");
  }
  try {
    s.domain.validate();
  } catch (const Error& e) {
    schema("$.domain", e.what());
  }
  if (root.contains("patches")) {
    if (!root["patches"].is_array()) schema("$.patches", "expected an array");
    for (size_t i = 0; i < root["patches"].size(); ++i) {
      const json& jp = root["patches"][i];
      std::string path = "$.patches[" + std::to_string(i) + "]";
      only_keys(jp, path, {"center_angle", "center_xy", "half_length", "bc"});
      Patch p;
      bool ang = jp.contains("center_angle"), xy = jp.contains("center_xy");
      if (ang == xy) schema(path, "exactly one of center_angle and center_xy is required");
      if (ang) {
        p.center = number(jp["center_angle"], path + ".center_angle");
      } else {
        try {
          p.center = s.domain.param_of(pair(jp["center_xy"], path + ".center_xy"), 1e-9);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::Schema) throw;
          schema(path + ".center_xy", e.what());
        }
      }
      if (!jp.contains("half_length")) schema(path + ".half_length", "missing");
      p.half_length = number(jp["half_length"], path + ".half_length");
      if (!jp.contains("bc")) schema(path + ".bc", "missing");
      p.bc = parse_bc(jp["bc"], path + ".bc", p.q);
      s.patches.push_back(p);
    }
  }
  if (root.contains("targets")) {
    if (!root["targets"].is_array()) schema("$.targets", "expected an array");
    for (size_t i = 0; i < root["targets"].size(); ++i) {
      const json& jt = root["targets"][i];
      std::string path = "$.targets[" + std::to_string(i) + "]";
      only_keys(jt, path, {"center", "size", "shape", "capacity", "bc"});
      InteriorTarget t;
      if (!jt.contains("center")) schema(path + ".center", "missing");
      t.center = pair(jt["center"], path + ".center");
      if (!jt.contains("size")) schema(path + ".size", "missing");
      t.size = number(jt["size"], path + ".size");
      std::string shape = "disk";
      if (jt.contains("shape")) {
        if (!jt["shape"].is_string()) schema(path + ".shape", "expected a string");
        shape = jt["shape"].get<std::string>();
      }
      if (shape == "disk") {
        t.shape = TargetShape::Disk;
        if (jt.contains("capacity") && number(jt["capacity"], path + ".capacity") != 1)
          schema(path + ".capacity", "disk targets have capacity 1");
      } else if (shape == "custom") {
        t.shape = TargetShape::Custom;
        if (!jt.contains("capacity")) schema(path + ".capacity", "custom targets need a capacity");
        t.capacity = number(jt["capacity"], path + ".capacity");
      } else {
        schema(path + ".shape", "unknown shape '" + shape + "'");
      }
      if (!jt.contains("bc")) schema(path + ".bc", "missing");
      t.bc = parse_bc(jt["bc"], path + ".bc", t.q);
      s.targets.push_back(t);
    }
  }
  if (!s.patches.empty() && !s.targets.empty())
    throw Error(ErrorCode::Unsupported, "scenes mixing boundary patches and interior targets are not supported");
  s.validate();
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

std::string serialize_scene(const Scene& s) {
  json root;
  root["version"] = kSceneVersion;
  root["domain"] = {{"kind", domain_kind_name(s.domain.kind)}, {"a", s.domain.a}, {"b", s.domain.b}};
  json patches = json::array();
  for (const auto& p : s.patches)
    patches.push_back({{"center_angle", p.center}, {"half_length", p.half_length}, {"bc", bc_json(p.bc, p.q)}});
  root["patches"] = patches;
  if (!s.targets.empty()) {
    json targets = json::array();
    for (const auto& t : s.targets) {
      json jt{{"center", {t.center.x, t.center.y}},
              {"size", t.size},
              {"shape", t.shape == TargetShape::Disk ? "disk" : "custom"},
              {"bc", bc_json(t.bc, t.q)}};
      if (t.shape == TargetShape::Custom) jt["capacity"] = t.capacity;
      targets.push_back(jt);
    }
    root["targets"] = targets;
  }
  return root.dump(2);
}

}  // namespace narrowpatch
