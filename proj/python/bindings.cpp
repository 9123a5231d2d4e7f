// Python surface of the envelope pipeline. Ambient vectors cross the
// boundary as plain lists, expressions as source strings parsed against the
// owning family's parameter names.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "envforge/envelope.hpp"
#include "envforge/optics.hpp"
#include "envforge/scene.hpp"

namespace py = pybind11;
using namespace envforge;

namespace {

std::vector<double> as_list(const Vec& v) {
  std::vector<double> out(static_cast<std::size_t>(v.dim));
  for (int i = 0; i < v.dim; ++i) out[static_cast<std::size_t>(i)] = v[i];
  return out;
}

Vec as_vec(const std::vector<double>& p) {
  if (p.size() == 2) return Vec(p[0], p[1]);
  if (p.size() == 3) return Vec(p[0], p[1], p[2]);
  throw Error("expected a point with 2 or 3 coordinates");
}

std::vector<std::vector<double>> point_table(const std::vector<Vec>& pts) {
  std::vector<std::vector<double>> out;
  out.reserve(pts.size());
  for (const Vec& p : pts) out.push_back(as_list(p));
  return out;
}

std::vector<bool> mask_list(const std::vector<char>& mask) {
  return std::vector<bool>(mask.begin(), mask.end());
}

std::vector<Expr> parse_all(const HyperplaneFamily& fam,
                            const std::vector<std::string>& sources) {
  std::vector<Expr> out;
  out.reserve(sources.size());
  for (const std::string& src : sources) out.push_back(parse(src, fam.params));
  return out;
}

// Expr is a shared_ptr alias, which pybind11 would treat as a holder; a
// value wrapper keeps the python side a plain object.
struct ExprHandle {
  Expr e;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Envelopes of hyperplane families: creator solve, envelope "
            "construction, mirrors, and support-density boundaries.";

  py::register_exception<Error>(m, "Error");

  py::class_<ExprHandle>(m, "Expr")
      .def("__repr__", [](const ExprHandle& h) { return "<Expr " + pretty(h.e) + ">"; })
      .def("__str__", [](const ExprHandle& h) { return pretty(h.e); })
      .def("__call__", [](const ExprHandle& h, const std::vector<double>& x) {
        return eval(h.e, x);
      });

  m.def(
      "parse",
      [](const std::string& source, const std::vector<std::string>& params) {
        return ExprHandle{parse(source, params)};
      },
      py::arg("source"), py::arg("params"),
      "Parse an expression over the named parameters.");

  py::class_<SampleGrid>(m, "SampleGrid")
      .def("total", &SampleGrid::total)
      .def("dim", &SampleGrid::dim)
      .def("step", &SampleGrid::step, py::arg("axis"))
      .def("coord", &SampleGrid::coord, py::arg("axis"), py::arg("i"))
      .def("point", [](const SampleGrid& g, long flat) { return g.point(flat); },
           py::arg("flat"))
      .def("__len__", &SampleGrid::total)
      .def("__repr__", [](const SampleGrid& g) {
        std::string r = "<SampleGrid";
        for (int a = 0; a < g.dim(); ++a)
          r += " [" + std::to_string(g.axes[static_cast<std::size_t>(a)].lo) + ", " +
               std::to_string(g.axes[static_cast<std::size_t>(a)].hi) + "]x" +
               std::to_string(g.counts[static_cast<std::size_t>(a)]);
        return r + ">";
      });

  py::class_<HyperplaneFamily>(m, "HyperplaneFamily")
      .def_readonly("n", &HyperplaneFamily::n)
      .def_readonly("params", &HyperplaneFamily::params)
      .def_property_readonly("ambient_dim", &HyperplaneFamily::ambient_dim)
      .def("grid", &HyperplaneFamily::grid, py::arg("samples") = 401)
      .def("phi",
           [](const HyperplaneFamily& f, const std::vector<double>& x) {
             return as_list(f.phi_at(x));
           },
           py::arg("x"), "Base point of the hyperplane at parameter x.")
      .def("nu",
           [](const HyperplaneFamily& f, const std::vector<double>& x) {
             return as_list(f.nu_at(x));
           },
           py::arg("x"), "Unit normal of the hyperplane at parameter x.")
      .def("__repr__", [](const HyperplaneFamily& f) {
        return "<HyperplaneFamily n=" + std::to_string(f.n) + " in R^" +
               std::to_string(f.ambient_dim()) + ">";
      });

  m.def(
      "catalog",
      [](const std::string& name, double theta0, py::object alpha, double c, int n,
         int samples) {
        CatalogOptions opts;
        opts.theta0 = theta0;
        opts.c = c;
        opts.n = n;
        opts.samples = samples;
        if (!alpha.is_none())
          opts.alpha = parse(alpha.cast<std::string>(), {"t"});
        return catalog(name, opts);
      },
      py::arg("name"), py::arg("theta0") = 0.0, py::arg("alpha") = py::none(),
      py::arg("c") = 1.0, py::arg("n") = 1, py::arg("samples") = 401,
      "Named example family; alpha is an expression in t where supported.");
  m.def("catalog_names", &catalog_names);
  m.def("catalog_describe", &catalog_describe, py::arg("name"));
  m.def("rotate_family", &rotate_family, py::arg("family"), py::arg("theta0"),
        "Rotate the plane family's normal by theta0.");
  m.def(
      "load_scene",
      [](const std::string& path) { return load_scene_file(path).family; },
      py::arg("path"), "Family described by a scene file (options ignored).");

  py::class_<CreatorField>(m, "CreatorField");

  py::class_<CreativityReport>(m, "CreativityReport")
      .def_property_readonly(
          "verdict",
          [](const CreativityReport& r) { return std::string(to_string(r.verdict)); })
      .def_property_readonly("uniqueness",
                             [](const CreativityReport& r) {
                               return std::string(to_string(r.uniqueness));
                             })
      .def_readonly("worst_residual", &CreativityReport::worst_residual)
      .def_readonly("regular_fraction", &CreativityReport::regular_fraction)
      .def_readonly("continuity_failed", &CreativityReport::continuity_failed)
      .def_readonly("worst_mismatch", &CreativityReport::worst_mismatch)
      .def("__repr__", [](const CreativityReport& r) {
        return std::string("<CreativityReport ") + to_string(r.verdict) +
               " worst_residual=" + std::to_string(r.worst_residual) + ">";
      });

  py::class_<CreatorSolution>(m, "CreatorSolution")
      .def_readonly("field", &CreatorSolution::field)
      .def_readonly("report", &CreatorSolution::report);

  m.def("solve_creator", &solve_creator, py::arg("family"), py::arg("grid"),
        "Decide creativity over the grid and solve for the creator field.");

  py::class_<EnvelopeMap>(m, "EnvelopeMap")
      .def_readonly("grid", &EnvelopeMap::grid)
      .def("points",
           [](const EnvelopeMap& e) {
             std::vector<std::vector<double>> out;
             out.reserve(e.samples.size());
             for (const EnvelopeSample& s : e.samples) out.push_back(as_list(s.f));
             return out;
           })
      .def("__len__", [](const EnvelopeMap& e) { return e.samples.size(); });

  m.def(
      "build_envelope",
      [](const HyperplaneFamily& fam, const CreatorField& field) {
        return build_envelope(fam, field);
      },
      py::arg("family"), py::arg("field"));
  m.def(
      "alternative_envelopes",
      [](const HyperplaneFamily& fam, const CreatorSolution& sol,
         const std::vector<std::string>& alphas) {
        return alternative_envelopes(fam, sol, parse_all(fam, alphas));
      },
      py::arg("family"), py::arg("solution"), py::arg("alphas"),
      "One envelope per coefficient expression (non-unique families only).");

  py::class_<VerificationReport>(m, "VerificationReport")
      .def_readonly("max_membership", &VerificationReport::max_membership)
      .def_readonly("max_tangency", &VerificationReport::max_tangency)
      .def_readonly("tol", &VerificationReport::tol)
      .def_property_readonly("passed",
                             [](const VerificationReport& r) { return r.pass; })
      .def("__repr__", [](const VerificationReport& r) {
        return std::string("<VerificationReport ") + (r.pass ? "pass" : "fail") +
               " membership=" + std::to_string(r.max_membership) +
               " tangency=" + std::to_string(r.max_tangency) + ">";
      });

  m.def(
      "verify_envelope",
      [](const HyperplaneFamily& fam, const EnvelopeMap& env) {
        return verify_envelope(fam, env);
      },
      py::arg("family"), py::arg("envelope"));
  m.def(
      "verify_envelope",
      [](const HyperplaneFamily& fam, const std::vector<std::string>& f,
         const SampleGrid& grid) {
        return verify_envelope(fam, parse_all(fam, f), grid);
      },
      py::arg("family"), py::arg("f"), py::arg("grid"),
      "Verify a closed-form candidate given as component expressions.");

  py::class_<E1Estimate>(m, "E1Estimate")
      .def_readonly("defined", &E1Estimate::defined)
      .def_readonly("max_distance", &E1Estimate::max_distance)
      .def_readonly("min_order", &E1Estimate::min_order)
      .def("__repr__", [](const E1Estimate& e) {
        return "<E1Estimate defined=" + std::to_string(e.defined) +
               " max_distance=" + std::to_string(e.max_distance) + ">";
      });

  m.def(
      "e1_envelope",
      [](const HyperplaneFamily& fam, const SampleGrid& grid) {
        return e1_envelope(fam, grid);
      },
      py::arg("family"), py::arg("grid"),
      "Neighbor-intersection envelope estimate with convergence orders.");

  py::class_<OrthotomicMap>(m, "OrthotomicMap")
      .def_readonly("grid", &OrthotomicMap::grid)
      .def_property_readonly("P",
                             [](const OrthotomicMap& o) { return as_list(o.P); })
      .def("points", [](const OrthotomicMap& o) { return point_table(o.f_p); })
      .def("normals", [](const OrthotomicMap& o) { return point_table(o.nu_p); })
      .def("admissible",
           [](const OrthotomicMap& o) { return mask_list(o.admissible); })
      .def_readonly("admissible_count", &OrthotomicMap::admissible_count);

  py::class_<PointField>(m, "PointField")
      .def_readonly("grid", &PointField::grid)
      .def("points", [](const PointField& p) { return point_table(p.points); })
      .def("admissible",
           [](const PointField& p) { return mask_list(p.admissible); })
      .def_readonly("admissible_count", &PointField::admissible_count)
      .def("__len__", [](const PointField& p) { return p.points.size(); });

  m.def(
      "orthotomic",
      [](const HyperplaneFamily& fam, const CreatorField& field,
         const std::vector<double>& P) { return orthotomic(fam, field, as_vec(P)); },
      py::arg("family"), py::arg("field"), py::arg("P"),
      "Reflection of the source P in every hyperplane of the family.");
  m.def("anti_orthotomic", &anti_orthotomic, py::arg("orthotomic"),
        "Mirror recovered from an orthotomic; equals the envelope.");
  m.def(
      "pedal",
      [](const HyperplaneFamily& fam, const SampleGrid& grid,
         const std::vector<double>& P) { return pedal(fam, grid, as_vec(P)); },
      py::arg("family"), py::arg("grid"), py::arg("P"),
      "Foot of the perpendicular from P onto each hyperplane.");
  m.def(
      "random_auxiliary_point",
      [](const HyperplaneFamily& fam, const SampleGrid& grid, std::uint64_t seed) {
        return as_list(random_auxiliary_point(fam, grid, seed));
      },
      py::arg("family"), py::arg("grid"), py::arg("seed"));

  py::class_<WulffShape>(m, "WulffShape")
      .def_readonly("grid", &WulffShape::grid)
      .def("points", [](const WulffShape& w) { return point_table(w.points); })
      .def("__len__", [](const WulffShape& w) { return w.points.size(); });

  m.def(
      "cahn_hoffman",
      [](const std::string& gamma, int samples) {
        return cahn_hoffman(WulffDensity{parse(gamma, {"theta"})}, samples);
      },
      py::arg("gamma"), py::arg("samples") = 401,
      "Boundary traced from a support density gamma(theta) on the circle.");
}
