#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "envforge/family.hpp"

namespace envforge {

/// A run description: the family plus everything a driver needs to act on
/// it. Parsed from JSON (schema version 1); every validation failure is a
/// SceneError naming the offending field path.
struct Scene {
  HyperplaneFamily family;
  int samples = 401;  // grid resolution per parameter axis
  double tol = 0.0;   // 0 means each operation's built-in default
  std::vector<Vec> aux_points;
  std::uint64_t seed = 20240915;
  Expr member;  // coefficient for a non-unique member pick; null when unset
};

/// Schema, by example:
/// {
///   "schema": 1,
///   "family": {"catalog": "ex1-3", "theta0": 0.0, "alpha": "sin(t)"},
///   "samples": 401,
///   "options": {"tol": 1e-6, "aux_points": [[0,2],[3,-1]], "seed": 7,
///               "member": "sin(t)"}
/// }
/// Alternatives for "family":
///   {"params": [{"name":"t","domain":[-2,2]}], "phi": [...], "nu": [...]}
///   {"derive": "tangent-line", "curve": ["cos(s)","sin(s)"],
///    "param": "s", "domain": [0, 6.2832]}
///   {"derive": "osculating", "curve": [3 exprs], "param": "s",
///    "domain": [lo,hi], "u_domain": [lo,hi]}
///   {"derive": "graph-normal", "height": "x^3/3 - y^2/2",
///    "params": [{"name":"x","domain":[-1.5,1.5]}, {"name":"y",...}]}
///   {"derive": "clairaut", "gamma": "1", "n": 1, "domain": [-2.2, 2.2]}
Scene load_scene(const std::string& json_text);

/// Reads the file and delegates to load_scene. Throws SceneError when the
/// file cannot be read.
Scene load_scene_file(const std::string& path);

}  // namespace envforge
