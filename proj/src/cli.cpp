#include "envforge/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "envforge/emit.hpp"
#include "envforge/envelope.hpp"
#include "envforge/optics.hpp"
#include "envforge/scene.hpp"

namespace envforge {

namespace {

constexpr int kOk = 0;
constexpr int kQualified = 1;
constexpr int kNegative = 2;
constexpr int kUsage = 64;
constexpr int kData = 65;

std::size_t at(long f) { return static_cast<std::size_t>(f); }

/// Bad flag combinations; maps to exit 64 like scene validation.
class UsageError : public Error {
public:
  using Error::Error;
};

struct Flags {
  std::string catalog_name;
  std::string scene_path;
  std::string out_spec;
  std::string plot_path;
  int samples = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  double theta0 = 0.0;
  std::string alpha;
  std::string beta;
  double c = 1.0;
  int n = 1;
  std::vector<std::string> P;
  std::string force_member;
  std::string gamma;
};

struct Ctx {
  std::ostream& out;
  std::ostream& err;
  Flags& fl;
  CLI::App* sub = nullptr;

  bool given(const std::string& flag) const { return sub && sub->count(flag) > 0; }
  void note(const std::string& msg) const {
    const char* v = std::getenv("ENVFORGE_LOG");
    if (v && *v) err << "[envforge] " << msg << "\n";
  }
};

void add_common(CLI::App* sub, Flags& fl) {
  sub->add_option("--catalog", fl.catalog_name, "catalog family name (see catalog-list)");
  sub->add_option("--scene", fl.scene_path, "scene JSON file");
  sub->add_option("--out", fl.out_spec, "'csv', 'json' (stdout), or an output path");
  sub->add_option("--plot", fl.plot_path, "write an SVG figure to this path");
  sub->add_option("--samples", fl.samples, "grid resolution per parameter axis");
  sub->add_option("--tol", fl.tol, "tolerance override for pass/fail decisions");
  sub->add_option("--seed", fl.seed, "seed for random auxiliary points");
  sub->add_option("--theta0", fl.theta0, "normal rotation angle (catalog families)");
  sub->add_option("--alpha", fl.alpha, "catalog shift expression in t");
  sub->add_option("--beta", fl.beta, "synonym for --force-member");
  sub->add_option("--c", fl.c, "constant support level (clairaut-const)");
  sub->add_option("--n", fl.n, "parameter dimension (clairaut-const)");
  sub->add_option("--P", fl.P, "auxiliary point as x,y[,z]; repeatable");
  sub->add_option("--force-member", fl.force_member,
                  "member coefficient expression for non-unique families");
  sub->add_option("--gamma", fl.gamma, "support density expression in theta (wulff)");
}

Vec parse_point(const std::string& text, int dim) {
  std::istringstream in(text);
  std::string cell;
  std::vector<double> comps;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      comps.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("--P expects comma-separated numbers, got '" + text + "'");
    }
  }
  if (comps.size() != static_cast<std::size_t>(dim))
    throw UsageError("--P needs " + std::to_string(dim) + " coordinates, got '" + text + "'");
  Vec out = Vec::zero(dim);
  for (int c = 0; c < dim; ++c) out[c] = comps[at(c)];
  return out;
}

Scene resolve_scene(const Ctx& ctx) {
  const Flags& fl = ctx.fl;
  Scene sc;
  if (!fl.scene_path.empty()) {
    sc = load_scene_file(fl.scene_path);
    if (fl.samples > 0) sc.samples = fl.samples;
  } else if (!fl.catalog_name.empty()) {
    CatalogOptions opts;
    opts.theta0 = fl.theta0;
    opts.c = fl.c;
    opts.n = fl.n;
    if (!fl.alpha.empty()) opts.alpha = parse(fl.alpha, {"t"});
    opts.samples = fl.samples > 0 ? fl.samples : opts.samples;
    sc.family = catalog(fl.catalog_name, opts);
    sc.samples = opts.samples;
  } else {
    throw UsageError("give either --catalog <name> or --scene <file>");
  }
  if (fl.tol > 0.0) sc.tol = fl.tol;
  if (ctx.given("--seed")) sc.seed = fl.seed;
  std::string member = !fl.force_member.empty() ? fl.force_member : fl.beta;
  if (!member.empty()) sc.member = parse(member, sc.family.params);
  if (!fl.P.empty()) {
    sc.aux_points.clear();
    for (const std::string& p : fl.P)
      sc.aux_points.push_back(parse_point(p, sc.family.ambient_dim()));
  }
  ctx.note("family with " + std::to_string(sc.family.n) + " parameter(s), " +
           std::to_string(sc.samples) + " samples per axis");
  return sc;
}

const char* kAxis[3] = {"x", "y", "z"};

Json run_doc(const char* command, const Scene& sc) {
  Json doc;
  doc["schema"] = 1;
  doc["command"] = command;
  doc["params"] = sc.family.params;
  doc["samples"] = sc.samples;
  return doc;
}

void write_file(const Ctx& ctx, const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << content;
  ctx.note("wrote " + path + " (" + std::to_string(content.size()) + " bytes)");
}

/// --out routing: "" picks `preferred`, "csv"/"json" go to stdout, anything
/// else is a path whose extension picks the format (csv unless .json).
void emit_result(const Ctx& ctx, const Json& doc, const Table& tb, const char* preferred) {
  std::string spec = ctx.fl.out_spec.empty() ? preferred : ctx.fl.out_spec;
  if (spec == "csv") {
    ctx.out << to_csv(tb);
    return;
  }
  if (spec == "json") {
    ctx.out << dump_json(doc);
    return;
  }
  bool as_json = spec.size() > 5 && spec.rfind(".json") == spec.size() - 5;
  write_file(ctx, spec, as_json ? dump_json(doc) : to_csv(tb));
}

void param_columns(const Scene& sc, Table& tb) {
  for (const std::string& p : sc.family.params) tb.columns.push_back(p);
}

void point_columns(const std::string& prefix, int dim, Table& tb) {
  for (int c = 0; c < dim; ++c) tb.columns.push_back(prefix + "_" + kAxis[c]);
}

/// Family hyperplane traces (2d only) in grey, data curves solid on top.
void write_plot(const Ctx& ctx, const HyperplaneFamily& fam, const SampleGrid& grid,
                const std::vector<std::vector<Vec>>& curves) {
  if (ctx.fl.plot_path.empty()) return;
  auto proj = [](const Vec& v) { return Vec(v[0], v.dim >= 2 ? v[1] : 0.0); };
  double lo0 = -1.0, hi0 = 1.0, lo1 = -1.0, hi1 = 1.0;
  bool first = true;
  for (const std::vector<Vec>& c : curves) {
    for (const Vec& v : c) {
      lo0 = first ? v[0] : std::min(lo0, v[0]);
      hi0 = first ? v[0] : std::max(hi0, v[0]);
      lo1 = first ? v[1] : std::min(lo1, v[1]);
      hi1 = first ? v[1] : std::max(hi1, v[1]);
      first = false;
    }
  }
  double span = std::max({hi0 - lo0, hi1 - lo1, 1e-6});
  std::vector<SvgPath> paths;
  if (fam.ambient_dim() == 2 && fam.n == 1) {
    int count = grid.counts[0];
    int stride = std::max(1, count / 48);
    for (int i = 0; i < count; i += stride) {
      double t = grid.coord(0, i);
      std::vector<double> x{t};
      Vec phi = fam.phi_at(x);
      Vec nu = fam.nu_at(x);
      Vec b(-nu[1], nu[0]);
      paths.push_back({{phi - (1.2 * span) * b, phi + (1.2 * span) * b},
                       "#8a8f98", 0.35, 1.0});
    }
  }
  for (const std::vector<Vec>& c : curves) {
    SvgPath p;
    for (const Vec& v : c) p.points.push_back(proj(v));
    p.stroke = "#b8252b";
    p.width = 2.0;
    paths.push_back(std::move(p));
  }
  write_file(ctx, ctx.fl.plot_path, svg_plot(paths));
}

/// Grid rows (and columns for surfaces) as polylines, subsampled for SVG.
std::vector<std::vector<Vec>> grid_curves(const SampleGrid& grid,
                                          const std::vector<Vec>& pts) {
  std::vector<std::vector<Vec>> out;
  if (grid.dim() == 1) {
    out.push_back(pts);
    return out;
  }
  int n0 = grid.counts[0];
  int n1 = grid.counts[1];
  int s0 = std::max(1, n0 / 33);
  int s1 = std::max(1, n1 / 33);
  for (int i = 0; i < n0; i += s0) {
    std::vector<Vec> row;
    for (int j = 0; j < n1; ++j)
      row.push_back(pts[at(static_cast<long>(i) * n1 + j)]);
    out.push_back(std::move(row));
  }
  for (int j = 0; j < n1; j += s1) {
    std::vector<Vec> col;
    for (int i = 0; i < n0; ++i)
      col.push_back(pts[at(static_cast<long>(i) * n1 + j)]);
    out.push_back(std::move(col));
  }
  return out;
}

int cmd_check(const Ctx& ctx) {
  Scene sc = resolve_scene(ctx);
  SampleGrid grid = sc.family.grid(sc.samples);
  CreatorSolution sol = solve_creator(sc.family, grid);
  const CreativityReport& rep = sol.report;
  Json doc = run_doc("check", sc);
  doc["verdict"] = to_string(rep.verdict);
  if (rep.verdict != Verdict::NotCreative)
    doc["uniqueness"] = to_string(rep.uniqueness);
  doc["worst_residual"] = rep.worst_residual;
  if (rep.worst_residual_at >= 0)
    doc["worst_residual_at"] = grid.point(rep.worst_residual_at);
  doc["singular_samples"] = rep.singular_samples.size();
  doc["regular_fraction"] = rep.regular_fraction;
  doc["continuity_failed"] = rep.continuity_failed;
  doc["worst_mismatch"] = rep.worst_mismatch;
  doc["flagged_boxes"] = rep.flagged.size();
  ctx.out << dump_json(doc);
  if (rep.verdict == Verdict::NotCreative) return kNegative;
  if (rep.verdict == Verdict::CreativeNonUnique) return kQualified;
  return kOk;
}

/// Shared by envelope/verify: creator solve plus the member pick rule.
/// NotCreative is reported by the caller via the returned verdict.
struct EnvelopeRun {
  CreatorSolution sol;
  EnvelopeMap env;
  bool nonunique = false;
};

EnvelopeRun run_envelope(const Ctx& ctx, const Scene& sc, const SampleGrid& grid) {
  EnvelopeRun run{solve_creator(sc.family, grid), {}, false};
  if (run.sol.report.verdict == Verdict::NotCreative) return run;
  run.nonunique = run.sol.report.uniqueness == Uniqueness::NonUnique;
  if (run.nonunique && sc.member) {
    run.env = alternative_envelopes(sc.family, run.sol, {sc.member})[0];
    ctx.note("non-unique family; emitting the requested member");
  } else {
    run.env = build_envelope(sc.family, run.sol.field);
    if (run.nonunique) ctx.note("non-unique family; emitting the minimum-norm member");
  }
  return run;
}

int cmd_envelope(const Ctx& ctx, bool verify_only) {
  Scene sc = resolve_scene(ctx);
  SampleGrid grid = sc.family.grid(sc.samples);
  EnvelopeRun run = run_envelope(ctx, sc, grid);
  if (run.sol.report.verdict == Verdict::NotCreative) {
    ctx.err << "family is not creative (worst residual "
            << fmt17(run.sol.report.worst_residual) << "); no envelope exists\n";
    return kNegative;
  }
  VerificationReport rep = verify_envelope(sc.family, run.env);
  if (sc.tol > 0.0) {
    rep.tol = sc.tol;
    rep.pass = rep.max_membership <= rep.tol && rep.max_tangency <= rep.tol;
  }

  Json doc = run_doc(verify_only ? "verify" : "envelope", sc);
  doc["verdict"] = to_string(run.sol.report.verdict);
  doc["uniqueness"] = to_string(run.sol.report.uniqueness);
  doc["member_forced"] = static_cast<bool>(sc.member) && run.nonunique;
  doc["max_membership"] = rep.max_membership;
  doc["max_membership_at"] = grid.point(rep.max_membership_at);
  doc["max_tangency"] = rep.max_tangency;
  doc["max_tangency_at"] = grid.point(rep.max_tangency_at);
  doc["tol"] = rep.tol;
  doc["pass"] = rep.pass;

  ResidualSamples res = envelope_residuals(sc.family, run.env);
  Table tb;
  param_columns(sc, tb);
  point_columns("f", sc.family.ambient_dim(), tb);
  point_columns("omega", sc.family.ambient_dim(), tb);
  tb.columns.push_back("gamma");
  tb.columns.push_back("residual_membership");
  tb.columns.push_back("residual_tangency");
  std::vector<Vec> pts;
  for (long f = 0; f < grid.total(); ++f) {
    std::vector<double> x = grid.point(f);
    const EnvelopeSample& s = run.env.samples[at(f)];
    std::vector<double> row = x;
    for (int c = 0; c < s.f.dim; ++c) row.push_back(s.f[c]);
    for (int c = 0; c < s.omega.dim; ++c) row.push_back(s.omega[c]);
    row.push_back(support(sc.family, x).gamma);
    row.push_back(res.membership[at(f)]);
    row.push_back(res.tangency[at(f)]);
    tb.rows.push_back(std::move(row));
    pts.push_back(s.f);
  }
  doc["table"] = table_json(tb);

  if (verify_only) {
    ctx.out << dump_json(doc);
    return rep.pass ? (run.nonunique ? kQualified : kOk) : kNegative;
  }
  emit_result(ctx, doc, tb, "csv");
  write_plot(ctx, sc.family, grid, grid_curves(grid, pts));
  return run.nonunique ? kQualified : kOk;
}

int cmd_e1(const Ctx& ctx) {
  Scene sc = resolve_scene(ctx);
  SampleGrid grid = sc.family.grid(sc.samples);
  E1Estimate est = e1_envelope(sc.family, grid);
  double tol = sc.tol > 0.0 ? sc.tol : 1e-5;

  Json doc = run_doc("e1", sc);
  doc["defined"] = est.defined;
  doc["total"] = grid.total();
  doc["max_distance"] = est.max_distance;
  if (est.max_distance_at >= 0) doc["max_distance_at"] = grid.point(est.max_distance_at);
  doc["min_order"] = est.min_order;
  doc["tol"] = tol;
  long unreliable = 0, parallel = 0;
  for (const E1Sample& s : est.samples) {
    unreliable += s.status == E1Status::Unreliable;
    parallel += s.status == E1Status::ParallelLines;
  }
  doc["unreliable"] = unreliable;
  doc["parallel"] = parallel;

  Table tb;
  param_columns(sc, tb);
  point_columns("e1", sc.family.ambient_dim(), tb);
  tb.columns.push_back("defined");
  tb.columns.push_back("order");
  tb.columns.push_back("distance");
  std::vector<Vec> pts;
  for (long f = 0; f < grid.total(); ++f) {
    const E1Sample& s = est.samples[at(f)];
    std::vector<double> row = grid.point(f);
    for (int c = 0; c < sc.family.ambient_dim(); ++c)
      row.push_back(s.status == E1Status::Ok ? s.point[c] : 0.0);
    row.push_back(s.status == E1Status::Ok ? 1.0 : 0.0);
    row.push_back(s.order);
    row.push_back(s.distance);
    tb.rows.push_back(std::move(row));
    if (s.status == E1Status::Ok) pts.push_back(s.point);
  }
  doc["table"] = table_json(tb);
  emit_result(ctx, doc, tb, "json");
  if (!pts.empty()) write_plot(ctx, sc.family, grid, {pts});

  if (est.defined == 0 || est.max_distance > tol) return kNegative;
  if (est.defined < grid.total()) return kQualified;
  return kOk;
}

std::vector<Vec> aux_points(const Ctx& ctx, const Scene& sc, const SampleGrid& grid,
                            std::size_t need) {
  std::vector<Vec> pts = sc.aux_points;
  std::uint64_t seed = sc.seed;
  while (pts.size() < need) {
    pts.push_back(random_auxiliary_point(sc.family, grid, seed));
    ctx.note("drew auxiliary point from seed " + std::to_string(seed));
    seed += 1;
  }
  return pts;
}

Table point_table(const Scene& sc, const SampleGrid& grid, const std::string& prefix,
                  const PointField& field) {
  Table tb;
  param_columns(sc, tb);
  point_columns(prefix, sc.family.ambient_dim(), tb);
  tb.columns.push_back("admissible");
  for (long f = 0; f < grid.total(); ++f) {
    std::vector<double> row = grid.point(f);
    for (int c = 0; c < sc.family.ambient_dim(); ++c)
      row.push_back(field.points[at(f)][c]);
    row.push_back(field.admissible[at(f)] ? 1.0 : 0.0);
    tb.rows.push_back(std::move(row));
  }
  return tb;
}

std::vector<Vec> admissible_points(const PointField& field) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < field.points.size(); ++i)
    if (field.admissible[i]) out.push_back(field.points[i]);
  return out;
}

int cmd_orthotomic(const Ctx& ctx) {
  Scene sc = resolve_scene(ctx);
  SampleGrid grid = sc.family.grid(sc.samples);
  Vec P = aux_points(ctx, sc, grid, 1)[0];
  CreatorSolution sol = solve_creator(sc.family, grid);
  OrthotomicMap ortho = orthotomic(sc.family, sol.field, P);

  Json doc = run_doc("orthotomic", sc);
  Json pj = Json::array();
  for (int c = 0; c < P.dim; ++c) pj.push_back(P[c]);
  doc["P"] = pj;
  doc["admissible"] = ortho.admissible_count;
  doc["total"] = grid.total();

  Table tb;
  param_columns(sc, tb);
  point_columns("fp", sc.family.ambient_dim(), tb);
  point_columns("nup", sc.family.ambient_dim(), tb);
  tb.columns.push_back("admissible");
  PointField as_field{grid, ortho.f_p, ortho.admissible, ortho.admissible_count};
  for (long f = 0; f < grid.total(); ++f) {
    std::vector<double> row = grid.point(f);
    for (int c = 0; c < sc.family.ambient_dim(); ++c) row.push_back(ortho.f_p[at(f)][c]);
    for (int c = 0; c < sc.family.ambient_dim(); ++c) row.push_back(ortho.nu_p[at(f)][c]);
    row.push_back(ortho.admissible[at(f)] ? 1.0 : 0.0);
    tb.rows.push_back(std::move(row));
  }
  doc["table"] = table_json(tb);
  emit_result(ctx, doc, tb, "csv");
  write_plot(ctx, sc.family, grid, {admissible_points(as_field)});
  return ortho.admissible_count == grid.total() ? kOk : kQualified;
}

int cmd_anti_orthotomic(const Ctx& ctx) {
  Scene sc = resolve_scene(ctx);
  SampleGrid grid = sc.family.grid(sc.samples);
  std::size_t need = std::max<std::size_t>(sc.aux_points.size(), 1);
  std::vector<Vec> Ps = aux_points(ctx, sc, grid, need);
  CreatorSolution sol = solve_creator(sc.family, grid);

  std::vector<PointField> anti;
  for (const Vec& P : Ps)
    anti.push_back(anti_orthotomic(orthotomic(sc.family, sol.field, P)));

  double tol = sc.tol > 0.0 ? sc.tol : 1e-8;
  double pairwise = 0.0;
  long joint = 0;
  for (std::size_t i = 0; i < anti.size(); ++i)
    for (std::size_t j = i + 1; j < anti.size(); ++j)
      for (long f = 0; f < grid.total(); ++f) {
        if (!anti[i].admissible[at(f)] || !anti[j].admissible[at(f)]) continue;
        joint += 1;
        pairwise = std::max(pairwise, norm(anti[i].points[at(f)] - anti[j].points[at(f)]));
      }

  Json doc = run_doc("anti-orthotomic", sc);
  Json pj = Json::array();
  for (const Vec& P : Ps) {
    Json one = Json::array();
    for (int c = 0; c < P.dim; ++c) one.push_back(P[c]);
    pj.push_back(one);
  }
  doc["P"] = pj;
  doc["admissible"] = anti[0].admissible_count;
  doc["total"] = grid.total();
  bool agree = anti.size() < 2 || pairwise <= tol;
  if (anti.size() >= 2) {
    doc["joint_samples"] = joint;
    doc["pairwise_max_distance"] = pairwise;
    doc["tol"] = tol;
    doc["agree"] = agree;
  }
  Table tb = point_table(sc, grid, "anti", anti[0]);
  doc["table"] = table_json(tb);
  emit_result(ctx, doc, tb, anti.size() >= 2 ? "json" : "csv");
  write_plot(ctx, sc.family, grid, {admissible_points(anti[0])});
  if (!agree) return kNegative;
  return anti[0].admissible_count == grid.total() ? kOk : kQualified;
}

int cmd_pedal(const Ctx& ctx) {
  Scene sc = resolve_scene(ctx);
  SampleGrid grid = sc.family.grid(sc.samples);
  Vec P = aux_points(ctx, sc, grid, 1)[0];
  PointField g = pedal(sc.family, grid, P);

  Json doc = run_doc("pedal", sc);
  Json pj = Json::array();
  for (int c = 0; c < P.dim; ++c) pj.push_back(P[c]);
  doc["P"] = pj;
  doc["admissible"] = g.admissible_count;
  doc["total"] = grid.total();
  Table tb = point_table(sc, grid, "pedal", g);
  doc["table"] = table_json(tb);
  emit_result(ctx, doc, tb, "csv");
  write_plot(ctx, sc.family, grid, {admissible_points(g)});
  return g.admissible_count == grid.total() ? kOk : kQualified;
}

int cmd_wulff(const Ctx& ctx) {
  if (ctx.fl.gamma.empty()) throw UsageError("wulff needs --gamma <expression in theta>");
  WulffDensity density{parse(ctx.fl.gamma, {"theta"})};
  int samples = ctx.fl.samples > 0 ? ctx.fl.samples : 401;
  WulffShape shape = cahn_hoffman(density, samples);

  Json doc;
  doc["schema"] = 1;
  doc["command"] = "wulff";
  doc["gamma"] = ctx.fl.gamma;
  doc["samples"] = samples;
  Table tb;
  tb.columns = {"theta", "w_x", "w_y"};
  for (long f = 0; f < shape.grid.total(); ++f) {
    const Vec& p = shape.points[at(f)];
    tb.rows.push_back({shape.grid.coord(0, static_cast<int>(f)), p[0], p[1]});
  }
  doc["table"] = table_json(tb);
  emit_result(ctx, doc, tb, "csv");
  if (!ctx.fl.plot_path.empty()) {
    SvgPath path{shape.points, "#b8252b", 1.0, 2.0};
    write_file(ctx, ctx.fl.plot_path, svg_plot({path}));
  }
  return kOk;
}

int cmd_catalog_list(const Ctx& ctx) {
  for (const std::string& name : catalog_names())
    ctx.out << name << ": " << catalog_describe(name) << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"envelopes of hyperplane families: creativity checks, envelope "
               "construction, mirror transforms, and figures"};
  app.name("envforge");
  Flags fl;
  CLI::App* c_check = app.add_subcommand("check", "decide creativity and uniqueness");
  CLI::App* c_env = app.add_subcommand("envelope", "construct and emit the envelope");
  CLI::App* c_verify = app.add_subcommand("verify", "residual-check the envelope");
  CLI::App* c_e1 =
      app.add_subcommand("e1", "intersection-limit envelope vs the constructed one");
  CLI::App* c_ortho = app.add_subcommand("orthotomic", "mirror images of a point");
  CLI::App* c_anti =
      app.add_subcommand("anti-orthotomic", "invert the mirror construction");
  CLI::App* c_pedal = app.add_subcommand("pedal", "feet of perpendiculars from a point");
  CLI::App* c_wulff = app.add_subcommand("wulff", "boundary of the anisotropic shape");
  CLI::App* c_list = app.add_subcommand("catalog-list", "print the family registry");
  for (CLI::App* sub : {c_check, c_env, c_verify, c_e1, c_ortho, c_anti, c_pedal, c_wulff})
    add_common(sub, fl);
  app.require_subcommand(1);

  std::vector<const char*> argv{"envforge"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Ctx ctx{out, err, fl, nullptr};
  for (CLI::App* sub : {c_check, c_env, c_verify, c_e1, c_ortho, c_anti, c_pedal, c_wulff})
    if (sub->parsed()) ctx.sub = sub;
  try {
    if (c_check->parsed()) return cmd_check(ctx);
    if (c_env->parsed()) return cmd_envelope(ctx, false);
    if (c_verify->parsed()) return cmd_envelope(ctx, true);
    if (c_e1->parsed()) return cmd_e1(ctx);
    if (c_ortho->parsed()) return cmd_orthotomic(ctx);
    if (c_anti->parsed()) return cmd_anti_orthotomic(ctx);
    if (c_pedal->parsed()) return cmd_pedal(ctx);
    if (c_wulff->parsed()) return cmd_wulff(ctx);
    if (c_list->parsed()) return cmd_catalog_list(ctx);
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const SceneError& e) {
    err << "scene error: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError& e) {
    err << "expression error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownIdentifier& e) {
    err << "expression error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnknownCatalogEntry& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

}  // namespace envforge
