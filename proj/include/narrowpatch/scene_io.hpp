#pragma once
// Scene files (JSON). Schema, version 1:
//   { "version": 1,
//     "domain":  { "kind": "disk-interior" | "disk-exterior" | "ellipse-interior" | "ellipse-exterior",
//                  "a": 2, "b": 1 },
//     "patches": [ { "center_angle": 0.0 | "center_xy": [x, y], "half_length": 0.1,
//                    "bc": { "type": "dirichlet" | "robin" | "steklov", "q": 10 } } ],
//     "targets": [ { "center": [x, y], "size": 0.05, "shape": "disk" | "custom", "capacity": 1,
//                    "bc": { "type": ..., "q": ... } } ] }
// Unknown keys are rejected; errors name the JSON path.

#include <string>

#include "narrowpatch/scene.hpp"

namespace narrowpatch {

inline constexpr int kSceneVersion = 1;

Scene parse_scene(const std::string& json_text);
Scene load_scene(const std::string& path);
std::string serialize_scene(const Scene& s);

DomainKind parse_domain_kind(const std::string& name);

}  // namespace narrowpatch
