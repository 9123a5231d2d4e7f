#include <cmath>

#include "doctest.h"
#include "envforge/envelope.hpp"

using namespace envforge;

namespace {

EnvelopeMap pipeline(const HyperplaneFamily& fam, const SampleGrid& grid) {
  return build_envelope(fam, solve_creator(fam, grid).field);
}

// Rotates every ambient component pair by chi at the expression level.
HyperplaneFamily rotated_plane_family(const HyperplaneFamily& fam, double chi) {
  HyperplaneFamily out = fam;
  out.rotation_base.reset();
  auto rot = [&](const std::vector<Expr>& v) {
    std::vector<Expr> w;
    w.push_back(mk_sub(mk_mul(mk_const(std::cos(chi)), v[0]),
                       mk_mul(mk_const(std::sin(chi)), v[1])));
    w.push_back(mk_add(mk_mul(mk_const(std::sin(chi)), v[0]),
                       mk_mul(mk_const(std::cos(chi)), v[1])));
    return w;
  };
  out.phi = rot(fam.phi);
  out.nu = rot(fam.nu);
  return out;
}

}  // namespace

TEST_CASE("cubic family envelope reproduces the curve") {
  HyperplaneFamily fam = catalog("ex1-3", {.alpha = parse("sin(t)", {"t"})});
  SampleGrid grid = fam.grid(401);
  EnvelopeMap env = pipeline(fam, grid);
  for (long f = 0; f < grid.total(); ++f) {
    double t = grid.coord(0, static_cast<int>(f));
    CHECK(norm(env.samples[static_cast<std::size_t>(f)].f - Vec(t, t * t * t)) < 1e-9);
  }
  VerificationReport rep = verify_envelope(fam, env);
  CHECK(rep.pass);
  VerificationReport closed =
      verify_envelope(fam, {parse("t", {"t"}), parse("t^3", {"t"})}, grid);
  CHECK(closed.pass);
  CHECK(closed.max_membership < 1e-12);
  CHECK(closed.max_tangency < 1e-12);
}

TEST_CASE("degree-five family envelope reproduces the cusp curve") {
  HyperplaneFamily fam = catalog("ex1-4", {.alpha = parse("sin(t)", {"t"})});
  SampleGrid grid = fam.grid(401);
  EnvelopeMap env = pipeline(fam, grid);
  for (long f = 0; f < grid.total(); ++f) {
    double t = grid.coord(0, static_cast<int>(f));
    CHECK(norm(env.samples[static_cast<std::size_t>(f)].f - Vec(t * t, std::pow(t, 5))) <
          1e-9);
  }
}

TEST_CASE("shoe surface is its own envelope") {
  HyperplaneFamily fam = catalog("shoe", {.samples = 41});
  SampleGrid grid = fam.grid(41);
  EnvelopeMap env = pipeline(fam, grid);
  for (long f = 0; f < grid.total(); ++f) {
    std::vector<double> x = grid.point(f);
    CHECK(norm(env.samples[static_cast<std::size_t>(f)].f - fam.phi_at(x)) < 1e-10);
  }
  VerificationReport rep = verify_envelope(fam, env);
  CHECK(rep.pass);
}

TEST_CASE("a vertically shifted curve fails the membership residual") {
  HyperplaneFamily fam = catalog("ex1-3");
  SampleGrid grid = fam.grid(201);
  VerificationReport rep =
      verify_envelope(fam, {parse("t", {"t"}), parse("t^3 + 0.1", {"t"})}, grid);
  CHECK(!rep.pass);
  // residual (a) is 0.1/sqrt(1+9t^4), largest at t = 0
  CHECK(rep.max_membership == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(grid.coord(0, static_cast<int>(rep.max_membership_at)) == 0.0);
  CHECK(rep.max_tangency < 1e-12);
}

TEST_CASE("a constant point passes against a pencil through it") {
  HyperplaneFamily fam = clairaut_family(mk_const(0.0), 1, {Interval{-2.0, 2.0}}, 101);
  SampleGrid grid = fam.grid(101);
  VerificationReport rep =
      verify_envelope(fam, {mk_const(0.0), mk_const(0.0)}, grid);
  CHECK(rep.pass);
  CHECK(rep.max_membership == 0.0);
  CHECK(rep.max_tangency == 0.0);
}

TEST_CASE("space curve and its tangent developable both pass against the osculating planes") {
  HyperplaneFamily fam = catalog("helix-osculating", {.samples = 31});
  SampleGrid grid = SampleGrid::uniform(fam.domain, {31, 7});
  std::vector<std::string> params = {"s", "u"};
  std::vector<Expr> curve = {parse("cos(s/sqrt(2))", params), parse("sin(s/sqrt(2))", params),
                             parse("s/sqrt(2)", params)};
  std::vector<Expr> developable = {parse("cos(s/sqrt(2)) - u*sin(s/sqrt(2))/sqrt(2)", params),
                                   parse("sin(s/sqrt(2)) + u*cos(s/sqrt(2))/sqrt(2)", params),
                                   parse("s/sqrt(2) + u/sqrt(2)", params)};
  VerificationReport a = verify_envelope(fam, curve, grid);
  VerificationReport b = verify_envelope(fam, developable, grid);
  CHECK(a.pass);
  CHECK(b.pass);
  CHECK(a.max_membership < 1e-9);
  CHECK(a.max_tangency < 1e-9);
  CHECK(b.max_membership < 1e-9);
  CHECK(b.max_tangency < 1e-9);
}

TEST_CASE("intersection-limit envelope agrees with the constructed one") {
  HyperplaneFamily circ = catalog("circle-tangents");
  SampleGrid cgrid = circ.grid(201);
  E1Estimate cest = e1_envelope(circ, cgrid);
  CHECK(cest.defined == cgrid.total());
  CHECK(cest.max_distance < 1e-8);
  CHECK(cest.min_order >= 0.8);

  // near the inflection of the cubic the expansion is contaminated; those
  // samples must be flagged unreliable, the rest must agree tightly
  HyperplaneFamily fam = catalog("ex1-3");
  SampleGrid grid = fam.grid(201);
  E1Estimate est = e1_envelope(fam, grid);
  CHECK(est.defined >= grid.total() - 15);
  CHECK(est.max_distance < 1e-5);
  CHECK(est.min_order >= 0.8);
  for (long f = 0; f < grid.total(); ++f)
    if (est.samples[static_cast<std::size_t>(f)].status != E1Status::Ok)
      CHECK(std::abs(grid.coord(0, static_cast<int>(f))) <= 0.25);
}

TEST_CASE("constant normal direction gives no intersections at all") {
  HyperplaneFamily fam = catalog("ex1-1", {.theta0 = 0.3, .alpha = parse("t", {"t"})});
  SampleGrid grid = fam.grid(51);
  E1Estimate est = e1_envelope(fam, grid);
  CHECK(est.defined == 0);
  for (const E1Sample& s : est.samples) CHECK(s.status == E1Status::ParallelLines);
}

TEST_CASE("constant-line family carries one envelope per coefficient") {
  HyperplaneFamily fam = catalog("ex1-1");
  SampleGrid grid = fam.grid(201);
  CreatorSolution sol = solve_creator(fam, grid);
  REQUIRE(sol.report.uniqueness == Uniqueness::NonUnique);
  std::vector<Expr> alphas = {mk_const(0.0), mk_const(1.0), parse("sin(t)", {"t"})};
  std::vector<EnvelopeMap> members = alternative_envelopes(fam, sol, alphas);
  REQUIRE(members.size() == 3);
  EnvelopeMap base = build_envelope(fam, sol.field);
  double sep = 0.0;
  for (long f = 0; f < grid.total(); ++f) {
    std::size_t uf = static_cast<std::size_t>(f);
    double t = grid.coord(0, static_cast<int>(f));
    CHECK(norm(members[0].samples[uf].f - base.samples[uf].f) == 0.0);
    CHECK(norm(members[1].samples[uf].f - Vec(1.0, 0.0)) < 1e-12);
    CHECK(norm(members[2].samples[uf].f - Vec(std::sin(t), 0.0)) < 1e-12);
    sep = std::max(sep, norm(members[1].samples[uf].f - members[2].samples[uf].f));
  }
  CHECK(sep >= 0.5);
  CHECK(verify_envelope(fam, members[1]).pass);
  CHECK(verify_envelope(fam, members[2]).pass);
}

TEST_CASE("osculating-plane members follow the kernel direction") {
  HyperplaneFamily fam = catalog("helix-osculating", {.samples = 31});
  SampleGrid grid = SampleGrid::uniform(fam.domain, {101, 7});
  CreatorSolution sol = solve_creator(fam, grid);
  REQUIRE(sol.report.uniqueness == Uniqueness::NonUnique);
  std::vector<Expr> alphas = {mk_const(0.0), parse("u", {"s", "u"})};
  std::vector<EnvelopeMap> members = alternative_envelopes(fam, sol, alphas);
  for (const EnvelopeMap& m : members) {
    VerificationReport rep = verify_envelope(fam, m);
    CHECK(rep.pass);
    CHECK(rep.max_membership < 1e-9);
  }
  // the two members differ by u * (unit kernel): norm u at the corners
  double diff = 0.0;
  for (std::size_t i = 0; i < members[0].samples.size(); ++i)
    diff = std::max(diff, norm(members[1].samples[i].f - members[0].samples[i].f));
  CHECK(diff == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unique envelopes admit no alternatives") {
  HyperplaneFamily fam = catalog("shoe", {.samples = 21});
  CreatorSolution sol = solve_creator(fam, fam.grid(21));
  CHECK_THROWS_AS(alternative_envelopes(fam, sol, {mk_const(1.0)}), NotApplicable);
}

TEST_CASE("singular solution of the constant-support equation is the sphere cap") {
  ClairautSolution one = clairaut_singular_solution(1.0, 1, 201);
  for (const Vec& p : one.points) {
    double x = p[0];
    if (std::abs(x) > 0.9) continue;
    CHECK(std::abs(p[1] + std::sqrt(1.0 - x * x)) < 1e-12);
  }
  ClairautSolution two = clairaut_singular_solution(1.0, 2, 41);
  for (const Vec& p : two.points) {
    double r2 = p[0] * p[0] + p[1] * p[1];
    if (r2 > 0.81) continue;
    CHECK(std::abs(p[2] + std::sqrt(1.0 - r2)) < 1e-12);
  }
  // negative constant picks the upper branch
  ClairautSolution neg = clairaut_singular_solution(-2.0, 2, 21);
  int center[] = {10, 10};
  long f = neg.grid.flatten(std::span<const int>(center, 2));
  CHECK(neg.grid.point(f)[0] == 0.0);
  CHECK(neg.grid.point(f)[1] == 0.0);
  CHECK(norm(neg.points[static_cast<std::size_t>(f)] - Vec(0.0, 0.0, 2.0)) < 1e-12);
}

TEST_CASE("envelope construction commutes with ambient rotations") {
  HyperplaneFamily fam = catalog("ex1-3");
  double chi = 0.7;
  HyperplaneFamily rot = rotated_plane_family(fam, chi);
  validate_family(rot, rot.grid(51));
  SampleGrid grid = fam.grid(201);
  EnvelopeMap base = pipeline(fam, grid);
  EnvelopeMap turned = pipeline(rot, grid);
  double c = std::cos(chi), s = std::sin(chi);
  for (std::size_t i = 0; i < base.samples.size(); ++i) {
    Vec fb = base.samples[i].f;
    Vec expect(c * fb[0] - s * fb[1], s * fb[0] + c * fb[1]);
    CHECK(norm(turned.samples[i].f - expect) < 1e-10);
  }
}

TEST_CASE("tangential reparametrization of phi leaves the envelope unchanged") {
  HyperplaneFamily plain = catalog("ex1-3");
  HyperplaneFamily shifted = catalog("ex1-3", {.alpha = parse("sin(t)", {"t"})});
  SampleGrid grid = plain.grid(401);
  EnvelopeMap a = pipeline(plain, grid);
  EnvelopeMap b = pipeline(shifted, grid);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(norm(a.samples[i].f - b.samples[i].f) < 1e-10);
}
