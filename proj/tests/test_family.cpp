#include <cmath>
#include <random>

#include "doctest.h"
#include "envforge/family.hpp"

using namespace envforge;

namespace {

const double kPi = 3.14159265358979323846;

HyperplaneFamily inline_family(int n, std::vector<std::string> params,
                               std::vector<Interval> domain,
                               std::vector<std::string> phi_src,
                               std::vector<std::string> nu_src) {
  HyperplaneFamily fam;
  fam.n = n;
  fam.params = params;
  fam.domain = std::move(domain);
  for (const auto& s : phi_src) fam.phi.push_back(parse(s, params));
  for (const auto& s : nu_src) fam.nu.push_back(parse(s, params));
  return fam;
}

}  // namespace

TEST_CASE("sampling grid shape and flat order") {
  SampleGrid g = SampleGrid::uniform({Interval{-1.0, 1.0}, Interval{0.0, 2.0}}, {3, 5});
  CHECK(g.total() == 15);
  CHECK(g.step(0) == doctest::Approx(1.0));
  CHECK(g.step(1) == doctest::Approx(0.5));
  // axis 0 major: flat = i0 * 5 + i1
  auto idx = g.unflatten(7);
  CHECK(idx[0] == 1);
  CHECK(idx[1] == 2);
  std::vector<double> x = g.point(7);
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(x[1] == doctest::Approx(1.0));
  std::array<int, 2> back{1, 2};
  CHECK(g.flatten(back) == 7);

  CHECK_THROWS_AS(SampleGrid::uniform({Interval{0.0, 1.0}}, 1), Error);
  CHECK_THROWS_AS(SampleGrid::uniform({Interval{1.0, 1.0}}, 5), Error);
}

TEST_CASE("grid endpoints and center are exact for the default ranges") {
  SampleGrid g = SampleGrid::uniform({Interval{-2.0, 2.0}}, 401);
  CHECK(g.coord(0, 0) == -2.0);
  CHECK(g.coord(0, 200) == 0.0);
  CHECK(g.coord(0, 400) == 2.0);
}

TEST_CASE("support value and gradient on the cubic tangent family") {
  HyperplaneFamily fam = catalog("ex1-3");
  double x0[] = {0.0};
  SupportValue s0 = support(fam, x0);
  CHECK(std::abs(s0.gamma) < 1e-15);
  CHECK(std::abs(s0.grad[0]) < 1e-15);

  // gamma(t) = -2 t^3 / sqrt(1 + 9 t^4) at t = 1
  double x1[] = {1.0};
  SupportValue s1 = support(fam, x1);
  CHECK(s1.gamma == doctest::Approx(-2.0 / std::sqrt(10.0)).epsilon(1e-14));
  CHECK(s1.grad[0] == doctest::Approx(-24.0 / std::pow(10.0, 1.5)).epsilon(1e-14));
}

TEST_CASE("support of the identity family on the circle is 1") {
  HyperplaneFamily fam =
      inline_family(1, {"theta"}, {Interval{-kPi, kPi}},
                    {"cos(theta)", "sin(theta)"}, {"cos(theta)", "sin(theta)"});
  validate_family(fam, fam.grid(101));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-kPi, kPi);
  for (int i = 0; i < 50; ++i) {
    double x[] = {dist(rng)};
    SupportValue s = support(fam, x);
    CHECK(s.gamma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(s.grad[0]) < 1e-14);
  }
}

TEST_CASE("constant-support central projection family has zero gradient") {
  HyperplaneFamily fam = catalog("clairaut-const", {.c = 2.0, .n = 2, .samples = 41});
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-2.2, 2.2);
  for (int i = 0; i < 50; ++i) {
    double x[] = {dist(rng), dist(rng)};
    SupportValue s = support(fam, x);
    CHECK(s.gamma == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(s.grad[0]) < 1e-12);
    CHECK(std::abs(s.grad[1]) < 1e-12);
  }
}

TEST_CASE("tangent lines of the unit circle point inward") {
  HyperplaneFamily fam = catalog("circle-tangents", {.samples = 101});
  SampleGrid g = fam.grid(101);
  for (long f = 0; f < g.total(); ++f) {
    std::vector<double> x = g.point(f);
    Vec nu = fam.nu_at(x);
    CHECK(nu[0] == doctest::Approx(-std::cos(x[0])).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(-std::sin(x[0])).epsilon(1e-12));
    SupportValue s = support(fam, x);
    CHECK(s.gamma == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("tangent line family of a graph curve matches the closed-form normal") {
  std::vector<std::string> t{"t"};
  HyperplaneFamily fam = tangent_line_family({parse("t", t), parse("t^3", t)}, "t",
                                             {-2.0, 2.0}, 101);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    double x[] = {dist(rng)};
    Vec nu = fam.nu_at(x);
    double den = std::sqrt(1.0 + 9.0 * std::pow(x[0], 4));
    CHECK(nu[0] == doctest::Approx(-3.0 * x[0] * x[0] / den).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(1.0 / den).epsilon(1e-12));
  }
}

TEST_CASE("tangent line family of a straight line") {
  std::vector<std::string> t{"t"};
  HyperplaneFamily fam =
      tangent_line_family({parse("t", t), parse("0", t)}, "t", {-1.0, 1.0}, 11);
  double x[] = {0.5};
  Vec nu = fam.nu_at(x);
  CHECK(nu[0] == 0.0);
  CHECK(nu[1] == 1.0);
  CHECK(support(fam, x).gamma == 0.0);
}

TEST_CASE("cusped curve is rejected as degenerate") {
  std::vector<std::string> t{"t"};
  CHECK_THROWS_AS(
      tangent_line_family({parse("t^2", t), parse("t^3", t)}, "t", {-1.0, 1.0}, 11),
      DegenerateCurve);
}

TEST_CASE("helix frame matches the closed form") {
  std::vector<std::string> s{"s"};
  FrenetData fd = frenet_space({parse("cos(s/sqrt(2))", s), parse("sin(s/sqrt(2))", s),
                                parse("s/sqrt(2)", s)},
                               "s", {-2.0, 2.0}, 101);
  const double r2 = std::sqrt(2.0);
  for (long f = 0; f < fd.grid.total(); ++f) {
    double sv = fd.grid.coord(0, static_cast<int>(f));
    double u = sv / r2;
    const Vec& b = fd.b_vals[static_cast<std::size_t>(f)];
    CHECK(b[0] == doctest::Approx(std::sin(u) / r2).epsilon(1e-12));
    CHECK(b[1] == doctest::Approx(-std::cos(u) / r2).epsilon(1e-12));
    CHECK(b[2] == doctest::Approx(1.0 / r2).epsilon(1e-12));
    CHECK(fd.kappa[static_cast<std::size_t>(f)] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fd.tau[static_cast<std::size_t>(f)] == doctest::Approx(0.5).epsilon(1e-12));

    // frame orthonormality
    const Vec& tv = fd.t_vals[static_cast<std::size_t>(f)];
    const Vec& nv = fd.n_vals[static_cast<std::size_t>(f)];
    CHECK(std::abs(norm(tv) - 1.0) < 1e-9);
    CHECK(std::abs(norm(nv) - 1.0) < 1e-9);
    CHECK(std::abs(norm(b) - 1.0) < 1e-9);
    CHECK(std::abs(dot(tv, nv)) < 1e-9);
    CHECK(std::abs(dot(tv, b)) < 1e-9);
    CHECK(std::abs(dot(nv, b)) < 1e-9);
    // unit speed
    CHECK(std::abs(norm(tv) * 1.0 - 1.0) < 1e-6);
  }
}

TEST_CASE("osculating planes of a planar space curve have a fixed normal") {
  std::vector<std::string> s{"s"};
  HyperplaneFamily fam = osculating_plane_family(
      {parse("cos(s)", s), parse("sin(s)", s), parse("0", s)}, "s", {-2.0, 2.0},
      {-1.0, 1.0}, 21);
  double xa[] = {0.3, -0.5};
  double xb[] = {0.3, 0.8};
  Vec na = fam.nu_at(xa);
  Vec nb = fam.nu_at(xb);
  CHECK(na[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(na[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(std::abs(std::abs(na[2]) - 1.0) < 1e-12);
  // the dummy parameter does not enter the normal
  for (int i = 0; i < 3; ++i) CHECK(na[i] == nb[i]);
  CHECK(support(fam, xa).gamma == doctest::Approx(support(fam, xb).gamma).epsilon(1e-14));
}

TEST_CASE("straight space curve is rejected for vanishing curvature") {
  std::vector<std::string> s{"s"};
  CHECK_THROWS_AS(osculating_plane_family({parse("s", s), parse("0", s), parse("0", s)},
                                          "s", {-1.0, 1.0}, {-1.0, 1.0}, 11),
                  VanishingCurvature);
}

TEST_CASE("rotating the vertical normal") {
  HyperplaneFamily fam = catalog("ex1-1", {.theta0 = kPi / 2});
  double x[] = {0.7};
  Vec nu = fam.nu_at(x);
  CHECK(nu[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(nu[1]) < 1e-12);
}

TEST_CASE("zero rotation leaves the family unchanged") {
  HyperplaneFamily fam = catalog("ex1-3");
  HyperplaneFamily same = rotate_family(fam, 0.0);
  for (int i = 0; i < 2; ++i) {
    CHECK(equal(same.nu[static_cast<std::size_t>(i)], fam.nu[static_cast<std::size_t>(i)]));
    CHECK(equal(same.phi[static_cast<std::size_t>(i)], fam.phi[static_cast<std::size_t>(i)]));
  }
}

TEST_CASE("a rotation and its inverse cancel exactly") {
  HyperplaneFamily fam = catalog("ex1-3");
  HyperplaneFamily there = rotate_family(fam, 0.7);
  HyperplaneFamily back = rotate_family(there, -0.7);
  for (int i = 0; i < 2; ++i)
    CHECK(equal(back.nu[static_cast<std::size_t>(i)], fam.nu[static_cast<std::size_t>(i)]));
}

TEST_CASE("half-turn negates the normal and the support") {
  HyperplaneFamily fam = catalog("ex1-3");
  HyperplaneFamily half = rotate_family(fam, kPi);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    double x[] = {dist(rng)};
    Vec a = fam.nu_at(x);
    Vec b = half.nu_at(x);
    CHECK(norm(a + b) < 1e-15);
    CHECK(support(fam, x).gamma == doctest::Approx(-support(half, x).gamma).epsilon(1e-12));
  }
}

TEST_CASE("rotation requires a one-parameter family") {
  HyperplaneFamily fam = catalog("shoe", {.samples = 21});
  CHECK_THROWS_AS(rotate_family(fam, 0.3), Error);
}

TEST_CASE("central projection chart") {
  HyperplaneFamily f1 = catalog("clairaut-const", {.c = 1.0, .n = 1, .samples = 41});
  double origin1[] = {0.0};
  Vec n1 = f1.nu_at(origin1);
  CHECK(n1[0] == 0.0);
  CHECK(n1[1] == -1.0);
  // support 1 at p = 0 places the hyperplane at Y = -1
  Vec p1 = f1.phi_at(origin1);
  Vec probe(3.7, -1.0);
  CHECK(std::abs(dot(probe - p1, n1)) < 1e-15);

  HyperplaneFamily f2 = catalog("clairaut-const", {.c = 1.0, .n = 2, .samples = 41});
  double origin2[] = {0.0, 0.0};
  Vec n2 = f2.nu_at(origin2);
  CHECK(n2[0] == 0.0);
  CHECK(n2[1] == 0.0);
  CHECK(n2[2] == -1.0);

  // slope recovery: X_i component over Y component is -p_i
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dist(-2.2, 2.2);
  for (int i = 0; i < 100; ++i) {
    double x[] = {dist(rng), dist(rng)};
    Vec nu = f2.nu_at(x);
    CHECK(nu[0] / nu[2] == doctest::Approx(-x[0]).epsilon(1e-12));
    CHECK(nu[1] / nu[2] == doctest::Approx(-x[1]).epsilon(1e-12));
  }
}

TEST_CASE("graph normal family reproduces the shoe surface normal") {
  HyperplaneFamily fam = catalog("shoe", {.samples = 41});
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    double x[] = {dist(rng), dist(rng)};
    Vec phi = fam.phi_at(x);
    CHECK(phi[0] == x[0]);
    CHECK(phi[1] == x[1]);
    CHECK(phi[2] == doctest::Approx(x[0] * x[0] * x[0] / 3.0 - x[1] * x[1] / 2.0)
                        .epsilon(1e-14));
    Vec nu = fam.nu_at(x);
    double den = std::sqrt(std::pow(x[0], 4) + x[1] * x[1] + 1.0);
    CHECK(nu[0] == doctest::Approx(-x[0] * x[0] / den).epsilon(1e-12));
    CHECK(nu[1] == doctest::Approx(x[1] / den).epsilon(1e-12));
    CHECK(nu[2] == doctest::Approx(1.0 / den).epsilon(1e-12));
  }
}

TEST_CASE("support derivative of a tangent family tracks the turning rate") {
  // gamma' = -(r . t) Theta' where Theta' = nu' . perp(nu)
  for (const char* name : {"circle-tangents", "ex1-3"}) {
    HyperplaneFamily fam = catalog(name, {.samples = 101});
    SampleGrid g = fam.grid(101);
    for (long f = 0; f < g.total(); ++f) {
      std::vector<double> x = g.point(f);
      VecJet nu = eval_vec_jet(fam.nu, x);
      VecJet phi = eval_vec_jet(fam.phi, x);
      double theta_rate = dot(nu.partial[0], perp(nu.value));
      double rt = dot(phi.value, normalized(phi.partial[0]));
      SupportValue s = support(fam, x);
      CHECK(std::abs(s.grad[0] + rt * theta_rate) < 1e-9 * (1.0 + std::abs(s.grad[0])));
    }
  }
}

TEST_CASE("catalog registry") {
  std::vector<std::string> names = catalog_names();
  CHECK(names.size() == 8);
  for (const std::string& name : names) CHECK(!catalog_describe(name).empty());
  CHECK_THROWS_AS(catalog("nope"), UnknownCatalogEntry);
  CHECK_THROWS_AS(catalog_describe("nope"), UnknownCatalogEntry);
}

TEST_CASE("validation rejects non-unit normals and domain faults") {
  HyperplaneFamily bad = inline_family(1, {"t"}, {Interval{-2.0, 2.0}},
                                       {"t", "0"}, {"t", "1"});
  CHECK_THROWS_AS(validate_family(bad, bad.grid(11)), Error);

  HyperplaneFamily faulty = inline_family(1, {"t"}, {Interval{-2.0, 2.0}},
                                          {"log(t - 5)", "0"}, {"0", "1"});
  CHECK_THROWS_AS(validate_family(faulty, faulty.grid(11)), DomainError);
}
