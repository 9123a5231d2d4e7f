#include "envforge/family.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

namespace envforge {

namespace {

std::string fmt_point(std::span<const double> x) {
  char buf[96];
  if (x.size() == 1) {
    std::snprintf(buf, sizeof buf, "%.6g", x[0]);
  } else {
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", x[0], x[1]);
  }
  return buf;
}

Expr sq(const Expr& e) { return mk_mul(e, e); }

// v / ||v|| as expression trees.
std::vector<Expr> normalize_exprs(const std::vector<Expr>& v) {
  Expr s = sq(v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) s = mk_add(s, sq(v[i]));
  Expr len = mk_call("sqrt", {s});
  std::vector<Expr> out;
  out.reserve(v.size());
  for (const Expr& e : v) out.push_back(mk_div(e, len));
  return out;
}

// Plane rotation by a fixed angle, coefficients folded to constants.
std::array<Expr, 2> rot2(const Expr& a, const Expr& b, double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {mk_sub(mk_mul(mk_const(c), a), mk_mul(mk_const(s), b)),
          mk_add(mk_mul(mk_const(s), a), mk_mul(mk_const(c), b))};
}

std::array<Expr, 3> cross_expr(const std::array<Expr, 3>& a, const std::array<Expr, 3>& b) {
  return {mk_sub(mk_mul(a[1], b[2]), mk_mul(a[2], b[1])),
          mk_sub(mk_mul(a[2], b[0]), mk_mul(a[0], b[2])),
          mk_sub(mk_mul(a[0], b[1]), mk_mul(a[1], b[0]))};
}

Vec eval_vec(const std::vector<Expr>& comps, std::span<const double> x) {
  Vec v = Vec::zero(static_cast<int>(comps.size()));
  for (int i = 0; i < v.dim; ++i) v[i] = eval(comps[static_cast<std::size_t>(i)], x);
  return v;
}

}  // namespace

SampleGrid SampleGrid::uniform(std::vector<Interval> axes, std::vector<int> counts) {
  if (axes.empty() || axes.size() != counts.size())
    throw Error("grid needs one count per axis");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (counts[k] < 2) throw Error("grid needs at least 2 points per axis");
    if (!(axes[k].hi > axes[k].lo)) throw Error("grid axis must be strictly increasing");
  }
  SampleGrid g;
  g.axes = std::move(axes);
  g.counts = std::move(counts);
  return g;
}

SampleGrid SampleGrid::uniform(std::vector<Interval> axes, int count_per_axis) {
  std::vector<int> counts(axes.size(), count_per_axis);
  return uniform(std::move(axes), std::move(counts));
}

long SampleGrid::total() const {
  long t = 1;
  for (int c : counts) t *= c;
  return t;
}

double SampleGrid::step(int axis) const {
  return axes[static_cast<std::size_t>(axis)].width() /
         (counts[static_cast<std::size_t>(axis)] - 1);
}

double SampleGrid::coord(int axis, int i) const {
  return axes[static_cast<std::size_t>(axis)].lo + i * step(axis);
}

std::array<int, 2> SampleGrid::unflatten(long flat) const {
  if (dim() == 1) return {static_cast<int>(flat), 0};
  int c1 = counts[1];
  return {static_cast<int>(flat / c1), static_cast<int>(flat % c1)};
}

long SampleGrid::flatten(std::span<const int> idx) const {
  if (dim() == 1) return idx[0];
  return static_cast<long>(idx[0]) * counts[1] + idx[1];
}

std::vector<double> SampleGrid::point(long flat) const {
  std::array<int, 2> idx = unflatten(flat);
  std::vector<double> x(static_cast<std::size_t>(dim()));
  for (int k = 0; k < dim(); ++k) x[static_cast<std::size_t>(k)] = coord(k, idx[static_cast<std::size_t>(k)]);
  return x;
}

SampleGrid HyperplaneFamily::grid(int count_per_axis) const {
  return SampleGrid::uniform(domain, count_per_axis);
}

Vec HyperplaneFamily::phi_at(std::span<const double> x) const { return eval_vec(phi, x); }
Vec HyperplaneFamily::nu_at(std::span<const double> x) const { return eval_vec(nu, x); }

VecJet eval_vec_jet(const std::vector<Expr>& comps, std::span<const double> x) {
  VecJet jet;
  int d = static_cast<int>(comps.size());
  jet.value = Vec::zero(d);
  jet.partial[0] = Vec::zero(d);
  jet.partial[1] = Vec::zero(d);
  for (int i = 0; i < d; ++i) {
    DualNumber dn = eval_dual(comps[static_cast<std::size_t>(i)], x);
    jet.value[i] = dn.value;
    for (std::size_t j = 0; j < x.size(); ++j) jet.partial[j][i] = dn.partials[j];
  }
  return jet;
}

void validate_family(const HyperplaneFamily& fam, const SampleGrid& grid) {
  if (fam.n != 1 && fam.n != 2) throw Error("family parameter dimension must be 1 or 2");
  std::size_t n = static_cast<std::size_t>(fam.n);
  if (fam.params.size() != n || fam.domain.size() != n)
    throw Error("family needs one name and one interval per parameter");
  if (fam.phi.size() != n + 1 || fam.nu.size() != n + 1)
    throw Error("phi and nu need one component per ambient axis");
  if (grid.dim() != fam.n) throw Error("grid dimension does not match the family");
  for (long f = 0; f < grid.total(); ++f) {
    std::vector<double> x = grid.point(f);
    (void)fam.phi_at(x);
    Vec nv = fam.nu_at(x);
    if (std::abs(norm(nv) - 1.0) > 1e-9)
      throw Error("nu is not a unit vector at x = " + fmt_point(x));
  }
}

SupportValue support(const HyperplaneFamily& fam, std::span<const double> x) {
  VecJet p = eval_vec_jet(fam.phi, x);
  VecJet nv = eval_vec_jet(fam.nu, x);
  SupportValue s;
  s.gamma = dot(p.value, nv.value);
  for (int j = 0; j < fam.n; ++j)
    s.grad[static_cast<std::size_t>(j)] =
        dot(p.partial[static_cast<std::size_t>(j)], nv.value) +
        dot(p.value, nv.partial[static_cast<std::size_t>(j)]);
  return s;
}

Expr support_expr(const HyperplaneFamily& fam) {
  Expr s = mk_mul(fam.phi[0], fam.nu[0]);
  for (std::size_t i = 1; i < fam.phi.size(); ++i)
    s = mk_add(s, mk_mul(fam.phi[i], fam.nu[i]));
  return s;
}

FrenetData frenet_plane(const std::array<Expr, 2>& r, const std::string& param,
                        Interval dom, int samples) {
  (void)param;
  std::array<Expr, 2> dr = {derive(r[0], 0), derive(r[1], 0)};
  std::array<Expr, 2> ddr = {derive(dr[0], 0), derive(dr[1], 0)};
  Expr speed = mk_call("sqrt", {mk_add(sq(dr[0]), sq(dr[1]))});

  FrenetData fd;
  fd.r = {r[0], r[1]};
  fd.t = {mk_div(dr[0], speed), mk_div(dr[1], speed)};
  fd.n = {mk_neg(fd.t[1]), fd.t[0]};
  fd.grid = SampleGrid::uniform({dom}, samples);

  long total = fd.grid.total();
  fd.t_vals.reserve(total);
  fd.n_vals.reserve(total);
  fd.kappa.reserve(total);
  for (long f = 0; f < total; ++f) {
    std::vector<double> x = fd.grid.point(f);
    Vec d1(eval(dr[0], x), eval(dr[1], x));
    double sp = norm(d1);
    if (sp < 1e-9)
      throw DegenerateCurve("curve velocity vanishes at " + fmt_point(x));
    Vec d2(eval(ddr[0], x), eval(ddr[1], x));
    Vec tv = (1.0 / sp) * d1;
    fd.t_vals.push_back(tv);
    fd.n_vals.push_back(perp(tv));
    // signed curvature (r' x r'') / ||r'||^3
    fd.kappa.push_back((d1[0] * d2[1] - d1[1] * d2[0]) / (sp * sp * sp));
  }
  return fd;
}

FrenetData frenet_space(const std::array<Expr, 3>& r, const std::string& param,
                        Interval dom, int samples) {
  (void)param;
  std::array<Expr, 3> dr = {derive(r[0], 0), derive(r[1], 0), derive(r[2], 0)};
  std::array<Expr, 3> ddr = {derive(dr[0], 0), derive(dr[1], 0), derive(dr[2], 0)};
  std::array<Expr, 3> dddr = {derive(ddr[0], 0), derive(ddr[1], 0), derive(ddr[2], 0)};
  Expr speed = mk_call("sqrt", {mk_add(mk_add(sq(dr[0]), sq(dr[1])), sq(dr[2]))});
  std::array<Expr, 3> t = {mk_div(dr[0], speed), mk_div(dr[1], speed), mk_div(dr[2], speed)};
  std::array<Expr, 3> dt = {derive(t[0], 0), derive(t[1], 0), derive(t[2], 0)};
  std::array<Expr, 3> bdir = cross_expr(dr, ddr);
  Expr bnorm = mk_call("sqrt", {mk_add(mk_add(sq(bdir[0]), sq(bdir[1])), sq(bdir[2]))});
  std::array<Expr, 3> b = {mk_div(bdir[0], bnorm), mk_div(bdir[1], bnorm), mk_div(bdir[2], bnorm)};
  std::array<Expr, 3> nrm = cross_expr(b, t);

  FrenetData fd;
  fd.r = {r[0], r[1], r[2]};
  fd.t = {t[0], t[1], t[2]};
  fd.n = {nrm[0], nrm[1], nrm[2]};
  fd.b = {b[0], b[1], b[2]};
  fd.grid = SampleGrid::uniform({dom}, samples);

  long total = fd.grid.total();
  for (long f = 0; f < total; ++f) {
    std::vector<double> x = fd.grid.point(f);
    Vec d1(eval(dr[0], x), eval(dr[1], x), eval(dr[2], x));
    double sp = norm(d1);
    if (sp < 1e-9)
      throw DegenerateCurve("curve velocity vanishes at " + fmt_point(x));
    Vec tp(eval(dt[0], x), eval(dt[1], x), eval(dt[2], x));
    if (norm(tp) < 1e-9)
      throw VanishingCurvature("curvature vanishes at " + fmt_point(x));
    Vec d2(eval(ddr[0], x), eval(ddr[1], x), eval(ddr[2], x));
    Vec d3(eval(dddr[0], x), eval(dddr[1], x), eval(dddr[2], x));
    Vec bd = cross(d1, d2);
    double bn = norm(bd);
    fd.t_vals.push_back((1.0 / sp) * d1);
    fd.b_vals.push_back((1.0 / bn) * bd);
    fd.n_vals.push_back(cross(fd.b_vals.back(), fd.t_vals.back()));
    fd.kappa.push_back(bn / (sp * sp * sp));
    fd.tau.push_back(dot(bd, d3) / (bn * bn));
  }
  return fd;
}

HyperplaneFamily tangent_line_family(const std::array<Expr, 2>& r,
                                     const std::string& param, Interval dom,
                                     int samples) {
  FrenetData fd = frenet_plane(r, param, dom, samples);
  HyperplaneFamily fam;
  fam.n = 1;
  fam.params = {param};
  fam.domain = {dom};
  fam.phi = {r[0], r[1]};
  fam.nu = fd.n;
  validate_family(fam, fd.grid);
  return fam;
}

HyperplaneFamily osculating_plane_family(const std::array<Expr, 3>& r,
                                         const std::string& param, Interval s_dom,
                                         Interval u_dom, int samples) {
  FrenetData fd = frenet_space(r, param, s_dom, samples);
  HyperplaneFamily fam;
  fam.n = 2;
  fam.params = {param, param == "u" ? "u2" : "u"};
  fam.domain = {s_dom, u_dom};
  fam.phi = {r[0], r[1], r[2]};
  fam.nu = fd.b;
  validate_family(fam, fam.grid(samples));
  return fam;
}

HyperplaneFamily graph_normal_family(const Expr& h,
                                     const std::array<std::string, 2>& params,
                                     std::array<Interval, 2> dom, int samples) {
  Expr hx = derive(h, 0);
  Expr hy = derive(h, 1);
  HyperplaneFamily fam;
  fam.n = 2;
  fam.params = {params[0], params[1]};
  fam.domain = {dom[0], dom[1]};
  fam.phi = {mk_param(0, params[0]), mk_param(1, params[1]), h};
  fam.nu = normalize_exprs({mk_neg(hx), mk_neg(hy), mk_const(1.0)});
  validate_family(fam, fam.grid(samples));
  return fam;
}

HyperplaneFamily clairaut_family(const Expr& gamma, int n,
                                 std::array<Interval, 2> dom, int samples) {
  if (n != 1 && n != 2) throw Error("clairaut family needs n = 1 or 2");
  std::vector<std::string> params =
      n == 1 ? std::vector<std::string>{"p"} : std::vector<std::string>{"p1", "p2"};
  std::vector<Expr> dir;
  for (int i = 0; i < n; ++i) dir.push_back(mk_param(i, params[static_cast<std::size_t>(i)]));
  dir.push_back(mk_const(-1.0));

  HyperplaneFamily fam;
  fam.n = n;
  fam.params = params;
  fam.domain.assign(dom.begin(), dom.begin() + n);
  fam.nu = normalize_exprs(dir);
  for (const Expr& comp : fam.nu) fam.phi.push_back(mk_mul(gamma, comp));
  validate_family(fam, fam.grid(samples));
  return fam;
}

HyperplaneFamily rotate_family(const HyperplaneFamily& fam, double theta0) {
  if (fam.n != 1) throw Error("rotation applies to one-parameter families only");
  std::shared_ptr<const HyperplaneFamily> base = fam.rotation_base;
  if (!base) {
    auto own = std::make_shared<HyperplaneFamily>(fam);
    own->rotation_base.reset();
    own->rotation_angle = 0.0;
    base = own;
  }
  double angle = fam.rotation_angle + theta0;

  HyperplaneFamily out;
  out.n = fam.n;
  out.params = fam.params;
  out.domain = fam.domain;
  out.phi = fam.phi;
  if (angle == 0.0) {
    out.nu = base->nu;
    return out;
  }
  std::array<Expr, 2> rotated = rot2(base->nu[0], base->nu[1], angle);
  out.nu = {rotated[0], rotated[1]};
  out.rotation_base = base;
  out.rotation_angle = angle;
  return out;
}

namespace {

// Builds one of the line families over the cubic-style base curves:
// phi = base + alpha * R_{pi/2} nu_theta, nu = R_theta nu_base.
HyperplaneFamily rotated_line_family(const std::array<Expr, 2>& base_phi,
                                     const std::array<Expr, 2>& base_nu,
                                     const std::string& param, Interval dom,
                                     double theta0, const Expr& alpha, int samples) {
  std::array<Expr, 2> nu_th = rot2(base_nu[0], base_nu[1], theta0);
  HyperplaneFamily fam;
  fam.n = 1;
  fam.params = {param};
  fam.domain = {dom};
  fam.phi = {mk_add(base_phi[0], mk_mul(alpha, mk_neg(nu_th[1]))),
             mk_add(base_phi[1], mk_mul(alpha, nu_th[0]))};
  fam.nu = {base_nu[0], base_nu[1]};
  fam = rotate_family(fam, theta0);
  validate_family(fam, fam.grid(samples));
  return fam;
}

const std::vector<std::pair<std::string, std::string>>& catalog_registry() {
  static const std::vector<std::pair<std::string, std::string>> entries = {
      {"ex1-1", "parallel horizontal lines carried by (alpha(t), 0), normal rotated by theta0; options theta0, alpha"},
      {"ex1-2", "unit-circle normal lines rotated by theta0 (envelope: circle of radius |cos theta0|); options theta0, alpha"},
      {"ex1-3", "tangent lines of the cubic (t, t^3), normal rotated by theta0; options theta0, alpha"},
      {"ex1-4", "tangent lines of the cusp curve (t^2, t^5), normal rotated by theta0; options theta0, alpha"},
      {"circle-tangents", "affine tangent lines of the unit circle"},
      {"helix-osculating", "osculating planes of the unit-speed circular helix"},
      {"shoe", "tangent planes of the graph z = x^3/3 - y^2/2"},
      {"clairaut-const", "planes at constant support distance c in the central-projection chart; options c, n"},
  };
  return entries;
}

}  // namespace

HyperplaneFamily catalog(const std::string& name, const CatalogOptions& opts) {
  std::vector<std::string> t{"t"};
  Expr alpha = opts.alpha ? opts.alpha : mk_const(0.0);
  if (name == "ex1-1") {
    return rotated_line_family({alpha, mk_const(0.0)}, {mk_const(0.0), mk_const(1.0)},
                               "t", {-2.0, 2.0}, opts.theta0, mk_const(0.0), opts.samples);
  }
  if (name == "ex1-2") {
    return rotated_line_family({parse("cos(t)", t), parse("sin(t)", t)},
                               {parse("cos(t)", t), parse("sin(t)", t)},
                               "t", {-3.141592653589793, 3.141592653589793},
                               opts.theta0, alpha, opts.samples);
  }
  if (name == "ex1-3") {
    return rotated_line_family({parse("t", t), parse("t^3", t)},
                               {parse("-3*t^2/sqrt(1+9*t^4)", t), parse("1/sqrt(1+9*t^4)", t)},
                               "t", {-2.0, 2.0}, opts.theta0, alpha, opts.samples);
  }
  if (name == "ex1-4") {
    return rotated_line_family({parse("t^2", t), parse("t^5", t)},
                               {parse("-5*t^3/sqrt(4+25*t^6)", t), parse("2/sqrt(4+25*t^6)", t)},
                               "t", {-2.0, 2.0}, opts.theta0, alpha, opts.samples);
  }
  if (name == "circle-tangents") {
    std::vector<std::string> s{"s"};
    return tangent_line_family({parse("cos(s)", s), parse("sin(s)", s)}, "s",
                               {0.0, 6.283185307179586}, opts.samples);
  }
  if (name == "helix-osculating") {
    std::vector<std::string> s{"s"};
    return osculating_plane_family({parse("cos(s/sqrt(2))", s), parse("sin(s/sqrt(2))", s),
                                    parse("s/sqrt(2)", s)},
                                   "s", {-2.0, 2.0}, {-1.0, 1.0}, opts.samples);
  }
  if (name == "shoe") {
    return graph_normal_family(parse("x^3/3 - y^2/2", {"x", "y"}), {"x", "y"},
                               {Interval{-1.5, 1.5}, Interval{-1.5, 1.5}}, opts.samples);
  }
  if (name == "clairaut-const") {
    return clairaut_family(mk_const(opts.c), opts.n,
                           {Interval{-2.2, 2.2}, Interval{-2.2, 2.2}}, opts.samples);
  }
  throw UnknownCatalogEntry(name);
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& [name, desc] : catalog_registry()) names.push_back(name);
  return names;
}

std::string catalog_describe(const std::string& name) {
  for (const auto& [entry, desc] : catalog_registry())
    if (entry == name) return desc;
  throw UnknownCatalogEntry(name);
}

}  // namespace envforge
