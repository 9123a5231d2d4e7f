#include "envforge/scene.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "envforge/errors.hpp"

namespace envforge {

namespace {

using nlohmann::json;

const json& field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SceneError(path + "." + key, "missing");
  return *it;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw SceneError(path, "expected a number");
  return v.get<double>();
}

int int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SceneError(path, "expected an integer");
  return v.get<int>();
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) throw SceneError(path, "expected a string");
  return v.get<std::string>();
}

Expr expr_at(const json& v, const std::string& path,
             const std::vector<std::string>& params) {
  try {
    return parse(string_at(v, path), params);
  } catch (const SceneError&) {
    throw;
  } catch (const Error& e) {
    throw SceneError(path, e.what());
  }
}

Interval interval_at(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2)
    throw SceneError(path, "expected [lo, hi]");
  Interval out{number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]")};
  if (!(out.lo < out.hi)) throw SceneError(path, "needs lo < hi");
  return out;
}

struct ParamSpec {
  std::vector<std::string> names;
  std::vector<Interval> domains;
};

ParamSpec params_at(const json& v, const std::string& path, std::size_t arity) {
  if (!v.is_array() || (arity != 0 && v.size() != arity) || v.empty() || v.size() > 2)
    throw SceneError(path, "expected an array of 1 or 2 parameter objects");
  ParamSpec out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_object()) throw SceneError(p, "expected an object");
    out.names.push_back(string_at(field(v[i], p, "name"), p + ".name"));
    out.domains.push_back(interval_at(field(v[i], p, "domain"), p + ".domain"));
  }
  return out;
}

std::vector<Expr> exprs_at(const json& v, const std::string& path, std::size_t arity,
                           const std::vector<std::string>& params) {
  if (!v.is_array() || v.size() != arity)
    throw SceneError(path, "expected an array of " + std::to_string(arity) +
                               " expression strings");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(expr_at(v[i], path + "[" + std::to_string(i) + "]", params));
  return out;
}

HyperplaneFamily derived_family(const json& fam, const std::string& path, int samples) {
  std::string kind = string_at(field(fam, path, "derive"), path + ".derive");
  if (kind == "tangent-line") {
    std::string param = string_at(field(fam, path, "param"), path + ".param");
    std::vector<Expr> curve =
        exprs_at(field(fam, path, "curve"), path + ".curve", 2, {param});
    Interval dom = interval_at(field(fam, path, "domain"), path + ".domain");
    return tangent_line_family({curve[0], curve[1]}, param, dom, samples);
  }
  if (kind == "osculating") {
    std::string param = string_at(field(fam, path, "param"), path + ".param");
    std::vector<Expr> curve =
        exprs_at(field(fam, path, "curve"), path + ".curve", 3, {param});
    Interval dom = interval_at(field(fam, path, "domain"), path + ".domain");
    Interval u_dom = interval_at(field(fam, path, "u_domain"), path + ".u_domain");
    return osculating_plane_family({curve[0], curve[1], curve[2]}, param, dom, u_dom,
                                   samples);
  }
  if (kind == "graph-normal") {
    ParamSpec ps = params_at(field(fam, path, "params"), path + ".params", 2);
    Expr h = expr_at(field(fam, path, "height"), path + ".height", ps.names);
    return graph_normal_family(h, {ps.names[0], ps.names[1]},
                               {ps.domains[0], ps.domains[1]}, samples);
  }
  if (kind == "clairaut") {
    int n = int_at(field(fam, path, "n"), path + ".n");
    if (n != 1 && n != 2) throw SceneError(path + ".n", "needs 1 or 2");
    std::vector<std::string> names =
        n == 1 ? std::vector<std::string>{"p"} : std::vector<std::string>{"p1", "p2"};
    Expr gamma = expr_at(field(fam, path, "gamma"), path + ".gamma", names);
    Interval dom = interval_at(field(fam, path, "domain"), path + ".domain");
    return clairaut_family(gamma, n, {dom, dom}, samples);
  }
  throw SceneError(path + ".derive", "unknown kind '" + kind + "'");
}

HyperplaneFamily family_at(const json& fam, const std::string& path, int samples) {
  if (!fam.is_object()) throw SceneError(path, "expected an object");
  if (fam.contains("catalog")) {
    CatalogOptions opts;
    opts.samples = samples;
    std::string name = string_at(fam["catalog"], path + ".catalog");
    if (fam.contains("theta0"))
      opts.theta0 = number_at(fam["theta0"], path + ".theta0");
    if (fam.contains("alpha"))
      opts.alpha = expr_at(fam["alpha"], path + ".alpha", {"t"});
    if (fam.contains("c")) opts.c = number_at(fam["c"], path + ".c");
    if (fam.contains("n")) opts.n = int_at(fam["n"], path + ".n");
    try {
      return catalog(name, opts);
    } catch (const Error& e) {
      throw SceneError(path + ".catalog", e.what());
    }
  }
  if (fam.contains("derive")) return derived_family(fam, path, samples);
  ParamSpec ps = params_at(field(fam, path, "params"), path + ".params", 0);
  std::size_t ambient = ps.names.size() + 1;
  HyperplaneFamily out;
  out.n = static_cast<int>(ps.names.size());
  out.params = ps.names;
  out.domain = ps.domains;
  out.phi = exprs_at(field(fam, path, "phi"), path + ".phi", ambient, ps.names);
  out.nu = exprs_at(field(fam, path, "nu"), path + ".nu", ambient, ps.names);
  try {
    validate_family(out, out.grid(std::min(samples, 41)));
  } catch (const Error& e) {
    throw SceneError(path + ".nu", e.what());
  }
  return out;
}

}  // namespace

Scene load_scene(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SceneError("$", e.what());
  }
  if (!doc.is_object()) throw SceneError("$", "expected a top-level object");
  int schema = int_at(field(doc, "$", "schema"), "$.schema");
  if (schema != 1)
    throw SceneError("$.schema", "unsupported version " + std::to_string(schema));
  Scene out;
  if (doc.contains("samples")) {
    out.samples = int_at(doc["samples"], "$.samples");
    if (out.samples < 2) throw SceneError("$.samples", "needs at least 2");
  }
  out.family = family_at(field(doc, "$", "family"), "$.family", out.samples);
  if (doc.contains("options")) {
    const json& opts = doc["options"];
    if (!opts.is_object()) throw SceneError("$.options", "expected an object");
    if (opts.contains("tol")) {
      out.tol = number_at(opts["tol"], "$.options.tol");
      if (out.tol <= 0.0) throw SceneError("$.options.tol", "needs a positive number");
    }
    if (opts.contains("seed")) {
      if (!opts["seed"].is_number_unsigned())
        throw SceneError("$.options.seed", "expected an unsigned integer");
      out.seed = opts["seed"].get<std::uint64_t>();
    }
    if (opts.contains("member"))
      out.member = expr_at(opts["member"], "$.options.member", out.family.params);
    if (opts.contains("aux_points")) {
      const json& pts = opts["aux_points"];
      if (!pts.is_array()) throw SceneError("$.options.aux_points", "expected an array");
      for (std::size_t i = 0; i < pts.size(); ++i) {
        std::string p = "$.options.aux_points[" + std::to_string(i) + "]";
        const json& pt = pts[i];
        if (!pt.is_array() || pt.size() != static_cast<std::size_t>(out.family.ambient_dim()))
          throw SceneError(p, "expected " + std::to_string(out.family.ambient_dim()) +
                                  " coordinates");
        Vec v = Vec::zero(out.family.ambient_dim());
        for (std::size_t c = 0; c < pt.size(); ++c)
          v[static_cast<int>(c)] = number_at(pt[c], p + "[" + std::to_string(c) + "]");
        out.aux_points.push_back(v);
      }
    }
  }
  return out;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError("$", "cannot read scene file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scene(buf.str());
}

}  // namespace envforge
