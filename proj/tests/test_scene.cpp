#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "envforge/errors.hpp"
#include "envforge/scene.hpp"

using namespace envforge;

namespace {

std::string failing_path(const std::string& text) {
  try {
    load_scene(text);
  } catch (const SceneError& e) {
    return e.path;
  }
  return "";
}

// Worst map distance between two families over a few probe points.
double family_gap(const HyperplaneFamily& a, const HyperplaneFamily& b,
                  const std::vector<std::vector<double>>& probes) {
  double worst = 0.0;
  for (const std::vector<double>& x : probes) {
    worst = std::max(worst, norm(a.phi_at(x) - b.phi_at(x)));
    worst = std::max(worst, norm(a.nu_at(x) - b.nu_at(x)));
  }
  return worst;
}

}  // namespace

TEST_CASE("catalog scene builds the registry family") {
  Scene sc = load_scene(R"json({"schema": 1,
    "family": {"catalog": "ex1-3", "alpha": "sin(t)"},
    "samples": 201})json");
  CHECK(sc.samples == 201);
  CHECK(sc.tol == 0.0);
  CHECK(sc.seed == 20240915);
  CHECK(!sc.member);
  CHECK(sc.aux_points.empty());
  HyperplaneFamily twin = catalog("ex1-3", {.alpha = parse("sin(t)", {"t"})});
  CHECK(sc.family.params == twin.params);
  CHECK(sc.family.domain[0].lo == twin.domain[0].lo);
  CHECK(sc.family.domain[0].hi == twin.domain[0].hi);
  CHECK(family_gap(sc.family, twin, {{-1.7}, {0.0}, {0.3}, {1.9}}) == 0.0);
}

TEST_CASE("explicit scene carries every option") {
  Scene sc = load_scene(R"json({"schema": 1,
    "family": {
      "params": [{"name": "t", "domain": [-2, 2]}],
      "phi": ["t", "t^3"],
      "nu": ["-3*t^2/sqrt(1+9*t^4)", "1/sqrt(1+9*t^4)"]},
    "samples": 101,
    "options": {"tol": 1e-6, "seed": 7, "member": "sin(t)",
                "aux_points": [[0, 2], [3, -1]]}})json");
  CHECK(sc.family.n == 1);
  CHECK(sc.family.ambient_dim() == 2);
  CHECK(sc.samples == 101);
  CHECK(sc.tol == 1e-6);
  CHECK(sc.seed == 7);
  CHECK(static_cast<bool>(sc.member));
  REQUIRE(sc.aux_points.size() == 2);
  CHECK(sc.aux_points[0][0] == 0.0);
  CHECK(sc.aux_points[0][1] == 2.0);
  CHECK(sc.aux_points[1][0] == 3.0);
  CHECK(sc.aux_points[1][1] == -1.0);
  HyperplaneFamily twin = catalog("ex1-3", {});
  CHECK(family_gap(sc.family, twin, {{-1.5}, {0.25}, {1.0}}) == 0.0);
}

TEST_CASE("derived scenes match their library construction") {
  Scene tl = load_scene(R"json({"schema": 1,
    "family": {"derive": "tangent-line", "curve": ["cos(s)", "sin(s)"],
               "param": "s", "domain": [0, 6.283185307179586]}})json");
  HyperplaneFamily twin = catalog("circle-tangents", {});
  CHECK(tl.family.params == twin.params);
  CHECK(family_gap(tl.family, twin, {{0.5}, {2.0}, {5.5}}) == 0.0);

  Scene shoe = load_scene(R"json({"schema": 1,
    "family": {"derive": "graph-normal", "height": "x^3/3 - y^2/2",
               "params": [{"name": "x", "domain": [-1.5, 1.5]},
                          {"name": "y", "domain": [-1.5, 1.5]}]}})json");
  HyperplaneFamily stwin = catalog("shoe", {});
  CHECK(shoe.family.n == 2);
  CHECK(shoe.family.params == stwin.params);
  CHECK(family_gap(shoe.family, stwin, {{0.3, -0.7}, {1.0, 1.0}, {-1.2, 0.4}}) == 0.0);

  Scene cl = load_scene(R"json({"schema": 1,
    "family": {"derive": "clairaut", "gamma": "1", "n": 1,
               "domain": [-2.2, 2.2]}})json");
  HyperplaneFamily ctwin = catalog("clairaut-const", {.c = 1.0, .n = 1});
  CHECK(cl.family.params == ctwin.params);
  CHECK(family_gap(cl.family, ctwin, {{-2.0}, {0.1}, {1.4}}) == 0.0);
}

TEST_CASE("scene errors name the offending field") {
  CHECK(failing_path("{") == "$");
  CHECK(failing_path(R"json([1, 2])json") == "$");
  CHECK(failing_path(R"json({"family": {"catalog": "ex1-2"}})json") == "$.schema");
  CHECK(failing_path(R"json({"schema": 2, "family": {"catalog": "ex1-2"}})json") ==
        "$.schema");
  CHECK(failing_path(
            R"json({"schema": 1, "family": {"catalog": "ex1-2"}, "samples": 1})json") ==
        "$.samples");
  CHECK(failing_path(R"json({"schema": 1})json") == "$.family");
  CHECK(failing_path(R"json({"schema": 1, "family": {"catalog": "nope"}})json") ==
        "$.family.catalog");
  CHECK(failing_path(R"json({"schema": 1, "family": {"derive": "spiral"}})json") ==
        "$.family.derive");
  CHECK(failing_path(R"json({"schema": 1, "family": {
    "params": [{"name": "t", "domain": [2, -2]}],
    "phi": ["t", "t^3"], "nu": ["0", "1"]}})json") == "$.family.params[0].domain");
  CHECK(failing_path(R"json({"schema": 1, "family": {
    "params": [{"name": "t", "domain": [-2, 2]}],
    "phi": ["t"], "nu": ["0", "1"]}})json") == "$.family.phi");
  CHECK(failing_path(R"json({"schema": 1, "family": {
    "params": [{"name": "t", "domain": [-2, 2]}],
    "phi": ["t", "t^3"], "nu": ["0", "1+"]}})json") == "$.family.nu[1]");
  CHECK(failing_path(R"json({"schema": 1, "family": {
    "params": [{"name": "t", "domain": [-2, 2]}],
    "phi": ["t", "t^3"], "nu": ["0", "0"]}})json") == "$.family.nu");
  CHECK(failing_path(R"json({"schema": 1, "family": {"catalog": "ex1-2"},
    "options": {"tol": -1}})json") == "$.options.tol");
  CHECK(failing_path(R"json({"schema": 1, "family": {"catalog": "ex1-2"},
    "options": {"seed": -4}})json") == "$.options.seed");
  CHECK(failing_path(R"json({"schema": 1, "family": {"catalog": "ex1-2"},
    "options": {"member": "sin(q)"}})json") == "$.options.member");
  CHECK(failing_path(R"json({"schema": 1, "family": {"catalog": "ex1-2"},
    "options": {"aux_points": [[1, 2, 3]]}})json") == "$.options.aux_points[0]");
  CHECK(failing_path(R"json({"schema": 1, "family": {"catalog": "ex1-2"},
    "options": {"aux_points": [[1, "a"]]}})json") == "$.options.aux_points[0][1]");
}

TEST_CASE("scene files load from disk") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "envforge_scene_roundtrip.json";
  {
    std::ofstream f(p);
    f << R"json({"schema": 1, "family": {"catalog": "ex1-2"}, "samples": 51})json";
  }
  Scene sc = load_scene_file(p.string());
  CHECK(sc.samples == 51);
  fs::remove(p);
  fs::path missing = fs::temp_directory_path() / "envforge_scene_missing.json";
  CHECK_THROWS_AS(load_scene_file(missing.string()), SceneError);
}
