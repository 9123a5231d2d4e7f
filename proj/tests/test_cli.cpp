#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "envforge/cli.hpp"
#include "envforge/emit.hpp"

using namespace envforge;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

int column(const Table& t, const std::string& name) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == name) return static_cast<int>(c);
  return -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(static_cast<bool>(f));
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos;
       p = text.find(needle, p + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("check exit codes follow the verdict") {
  CliResult unique = run({"check", "--catalog", "ex1-3"});
  CHECK(unique.code == 0);
  Json doc = Json::parse(unique.out);
  CHECK(doc["verdict"] == "Creative");
  CHECK(doc["uniqueness"] == "Unique");
  CHECK(doc["worst_residual"].get<double>() < 1e-12);
  CHECK(doc["continuity_failed"] == false);

  CliResult nonunique = run({"check", "--catalog", "ex1-1", "--alpha", "t"});
  CHECK(nonunique.code == 1);
  CHECK(Json::parse(nonunique.out)["verdict"] == "CreativeNonUnique");

  CliResult rotated =
      run({"check", "--catalog", "ex1-1", "--alpha", "t", "--theta0", "0.5"});
  CHECK(rotated.code == 2);
  Json rdoc = Json::parse(rotated.out);
  CHECK(rdoc["verdict"] == "NotCreative");
  CHECK(!rdoc.contains("uniqueness"));
  CHECK(rdoc["worst_residual"].get<double>() > 0.4);
}

TEST_CASE("envelope emits the cusp curve as csv") {
  CliResult r = run({"envelope", "--catalog", "ex1-4", "--out", "csv",
                     "--samples", "201"});
  CHECK(r.code == 0);
  Table t = parse_csv(r.out);
  REQUIRE(t.columns.size() == 8);
  int ct = column(t, "t");
  int cx = column(t, "f_x");
  int cy = column(t, "f_y");
  int cm = column(t, "residual_membership");
  REQUIRE(ct >= 0);
  REQUIRE(cm >= 0);
  REQUIRE(t.rows.size() == 201);
  for (const std::vector<double>& row : t.rows) {
    double tt = row[static_cast<std::size_t>(ct)];
    CHECK(std::abs(row[static_cast<std::size_t>(cx)] - tt * tt) < 1e-8);
    CHECK(std::abs(row[static_cast<std::size_t>(cy)] - std::pow(tt, 5)) < 1e-8);
    CHECK(row[static_cast<std::size_t>(cm)] < 1e-10);
  }
}

TEST_CASE("envelope refuses a non-creative family") {
  CliResult r = run({"envelope", "--catalog", "ex1-4", "--theta0", "0.3"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("not creative") != std::string::npos);
}

TEST_CASE("forced member drives a non-unique envelope") {
  CliResult r = run({"envelope", "--catalog", "ex1-1", "--alpha", "t",
                     "--force-member", "1", "--out", "json", "--samples", "101"});
  CHECK(r.code == 1);
  Json doc = Json::parse(r.out);
  CHECK(doc["uniqueness"] == "NonUnique");
  CHECK(doc["member_forced"] == true);
  CHECK(doc["pass"] == true);
  std::vector<std::string> cols = doc["table"]["columns"].get<std::vector<std::string>>();
  std::size_t fx = 0, fy = 0;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] == "f_x") fx = c;
    if (cols[c] == "f_y") fy = c;
  }
  for (const Json& row : doc["table"]["rows"]) {
    CHECK(std::abs(std::abs(row[fx].get<double>()) - 1.0) < 1e-12);
    CHECK(std::abs(row[fy].get<double>()) < 1e-12);
  }
}

TEST_CASE("verify reports residual bounds") {
  CliResult r = run({"verify", "--catalog", "ex1-3", "--samples", "201"});
  CHECK(r.code == 0);
  Json doc = Json::parse(r.out);
  CHECK(doc["command"] == "verify");
  CHECK(doc["pass"] == true);
  CHECK(doc["max_membership"].get<double>() < 1e-9);
  CHECK(doc["max_tangency"].get<double>() <= doc["tol"].get<double>());

  CliResult member = run({"verify", "--catalog", "ex1-1", "--alpha", "t",
                          "--beta", "1", "--samples", "101"});
  CHECK(member.code == 1);
  CHECK(Json::parse(member.out)["member_forced"] == true);
}

TEST_CASE("constant-support envelope is the lower unit semicircle") {
  CliResult r = run({"envelope", "--catalog", "clairaut-const", "--c", "1",
                     "--out", "csv", "--samples", "201"});
  CHECK(r.code == 0);
  Table t = parse_csv(r.out);
  int cx = column(t, "f_x");
  int cy = column(t, "f_y");
  REQUIRE(cx >= 0);
  for (const std::vector<double>& row : t.rows) {
    double x = row[static_cast<std::size_t>(cx)];
    double y = row[static_cast<std::size_t>(cy)];
    CHECK(std::abs(x * x + y * y - 1.0) < 1e-8);
    CHECK(y < 0.0);
  }
}

TEST_CASE("e1 reports the intersection-limit table") {
  CliResult r = run({"e1", "--catalog", "ex1-3", "--samples", "201"});
  CHECK(r.code == 1);
  Json doc = Json::parse(r.out);
  CHECK(doc["total"] == 201);
  long defined = doc["defined"].get<long>();
  CHECK(defined >= 180);
  CHECK(defined < 201);
  CHECK(doc["max_distance"].get<double>() < 1e-5);
  CHECK(doc["min_order"].get<double>() >= 0.8);

  CliResult surface = run({"e1", "--catalog", "shoe"});
  CHECK(surface.code == 65);
  CHECK(!surface.err.empty());
}

TEST_CASE("anti-orthotomic sources agree") {
  CliResult r = run({"anti-orthotomic", "--catalog", "ex1-3", "--P", "0,2",
                     "--P", "3,-1", "--samples", "201"});
  CHECK(r.code == 1);
  Json doc = Json::parse(r.out);
  CHECK(doc["agree"] == true);
  CHECK(doc["pairwise_max_distance"].get<double>() < 1e-8);
  CHECK(doc["joint_samples"].get<long>() > 150);
}

TEST_CASE("orthotomic from the circle center doubles the radius") {
  CliResult r = run({"orthotomic", "--catalog", "ex1-2", "--P", "0,0",
                     "--out", "csv", "--samples", "101"});
  CHECK(r.code == 0);
  Table t = parse_csv(r.out);
  int cx = column(t, "fp_x");
  int cy = column(t, "fp_y");
  int ca = column(t, "admissible");
  REQUIRE(cx >= 0);
  for (const std::vector<double>& row : t.rows) {
    double x = row[static_cast<std::size_t>(cx)];
    double y = row[static_cast<std::size_t>(cy)];
    CHECK(std::sqrt(x * x + y * y) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(row[static_cast<std::size_t>(ca)] == 1.0);
  }
}

TEST_CASE("pedal of the circle tangents from the center is the circle") {
  CliResult r = run({"pedal", "--catalog", "circle-tangents", "--P", "0,0",
                     "--out", "csv", "--samples", "101"});
  CHECK(r.code == 0);
  Table t = parse_csv(r.out);
  int cx = column(t, "pedal_x");
  int cy = column(t, "pedal_y");
  REQUIRE(cx >= 0);
  for (const std::vector<double>& row : t.rows) {
    double x = row[static_cast<std::size_t>(cx)];
    double y = row[static_cast<std::size_t>(cy)];
    CHECK(std::abs(x * x + y * y - 1.0) < 1e-12);
  }
}

TEST_CASE("wulff emits a closed boundary curve") {
  namespace fs = std::filesystem;
  fs::path svg = fs::temp_directory_path() / "envforge_wulff_test.svg";
  CliResult r = run({"wulff", "--gamma", "2+cos(theta)", "--plot", svg.string()});
  CHECK(r.code == 0);
  Table t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 401);
  int cx = column(t, "w_x");
  int cy = column(t, "w_y");
  CHECK(std::abs(t.rows.front()[static_cast<std::size_t>(cx)] -
                 t.rows.back()[static_cast<std::size_t>(cx)]) < 1e-12);
  CHECK(std::abs(t.rows.front()[static_cast<std::size_t>(cy)] -
                 t.rows.back()[static_cast<std::size_t>(cy)]) < 1e-12);
  std::string text = slurp(svg);
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("viewBox=") != std::string::npos);
  fs::remove(svg);

  CliResult missing = run({"wulff"});
  CHECK(missing.code == 64);
  CHECK(missing.err.find("--gamma") != std::string::npos);
}

TEST_CASE("catalog list names every family") {
  CliResult r = run({"catalog-list"});
  CHECK(r.code == 0);
  for (const char* name : {"ex1-1", "ex1-2", "ex1-3", "ex1-4", "circle-tangents",
                           "helix-osculating", "shoe", "clairaut-const"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("usage errors exit with code 64") {
  CHECK(run({}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({"check", "--catalog", "ex1-2", "--bogus"}).code == 64);
  CHECK(run({"check", "--catalog", "nope"}).code == 64);
  CHECK(run({"pedal", "--catalog", "ex1-2", "--P", "1,zebra"}).code == 64);

  CliResult nofam = run({"check"});
  CHECK(nofam.code == 64);
  CHECK(nofam.err.find("--catalog") != std::string::npos);

  CliResult help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("check") != std::string::npos);
}

TEST_CASE("scene validation failures exit with code 64") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "envforge_bad_scene.json";
  {
    std::ofstream f(p);
    f << R"({"schema": 1, "family": {"catalog": "ex1-2"}, "options": {"tol": -1}})";
  }
  CliResult r = run({"check", "--scene", p.string()});
  CHECK(r.code == 64);
  CHECK(r.err.find("$.options.tol") != std::string::npos);
  fs::remove(p);

  fs::path missing = fs::temp_directory_path() / "envforge_no_such_scene.json";
  CHECK(run({"check", "--scene", missing.string()}).code == 64);
}

TEST_CASE("scene file drives the run and flags override it") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "envforge_scene_override.json";
  {
    std::ofstream f(p);
    f << R"({"schema": 1, "family": {"catalog": "ex1-2"}, "samples": 51})";
  }
  CliResult base = run({"check", "--scene", p.string()});
  CHECK(base.code == 0);
  CHECK(Json::parse(base.out)["samples"] == 51);
  CliResult over = run({"check", "--scene", p.string(), "--samples", "75"});
  CHECK(Json::parse(over.out)["samples"] == 75);
  fs::remove(p);
}

TEST_CASE("out paths pick the format by extension") {
  namespace fs = std::filesystem;
  fs::path jp = fs::temp_directory_path() / "envforge_run.json";
  fs::path cp = fs::temp_directory_path() / "envforge_run.csv";

  CliResult rj = run({"envelope", "--catalog", "ex1-2", "--samples", "51",
                      "--out", jp.string()});
  CHECK(rj.code == 0);
  CHECK(rj.out.empty());
  Json doc = Json::parse(slurp(jp));
  CHECK(doc["command"] == "envelope");
  CHECK(doc["table"]["rows"].size() == 51);

  CliResult rc = run({"envelope", "--catalog", "ex1-2", "--samples", "51",
                      "--out", cp.string()});
  CHECK(rc.code == 0);
  Table t = parse_csv(slurp(cp));
  CHECK(t.rows.size() == 51);

  fs::remove(jp);
  fs::remove(cp);
}

TEST_CASE("envelope plot draws hyperplanes under the curve") {
  namespace fs = std::filesystem;
  fs::path sp = fs::temp_directory_path() / "envforge_envelope_plot.svg";
  CliResult r = run({"envelope", "--catalog", "ex1-3", "--samples", "101",
                     "--out", "json", "--plot", sp.string()});
  CHECK(r.code == 0);
  std::string text = slurp(sp);
  CHECK(text.find("stroke=\"#8a8f98\"") != std::string::npos);
  CHECK(text.find("stroke=\"#b8252b\"") != std::string::npos);
  CHECK(count_of(text, "<polyline") >= 40);
  fs::remove(sp);
}

TEST_CASE("diagnostic notes appear only when enabled") {
  CliResult quiet = run({"check", "--catalog", "ex1-2", "--samples", "51"});
  CHECK(quiet.err.empty());
  setenv("ENVFORGE_LOG", "1", 1);
  CliResult loud = run({"check", "--catalog", "ex1-2", "--samples", "51"});
  unsetenv("ENVFORGE_LOG");
  CHECK(loud.code == quiet.code);
  CHECK(loud.out == quiet.out);
  CHECK(loud.err.find("[envforge]") != std::string::npos);
}
