#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orbital/errors.hpp"
#include "orbital/experiment.hpp"
#include "orbital/io.hpp"

using namespace orbital;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(
name: small
map:
  p: [[-1, 0], [0, 0], [1, 0]]
shape:
  kind: circle
  center: [2, 2]
  radius: 1
  n: 1024
orbit:
  depth: 6
ladder:
  finest: 10
julia:
  method: escape_boundary
  resolution: 512
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(kSmall);
  CHECK(c.name == "small");
  REQUIRE(c.p.size() == 3);
  CHECK(c.p[0] == Complex{-1, 0});
  CHECK(c.shape.kind == "circle");
  CHECK(c.shape.center == Complex{2, 2});
  CHECK(c.shape.n == 1024);
  CHECK(c.depth == 6);
  CHECK(c.ladder_finest == 10);
  CHECK(c.orbit_dedup_cell() == std::ldexp(1.0, -12));
  CHECK(c.julia.method == JuliaMethod::escape_boundary);
  CHECK_FALSE(c.julia.seed.has_value());
  CHECK(make_map(c).degree() == 2);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(std::string(kSmall) + "bogus: 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("name: x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map: {p: [[0, 0], [0, 0], [1, 0]]}\nshape: {kind: blob}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("map: {p: [[0, 0], [0, 0], [1, 0]]}\nshape: {kind: circle, radius: [1]}\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.yaml"), ConfigError);
}

TEST_CASE("bundled configs parse") {
  int n = 0;
  for (const auto& entry : fs::directory_iterator(ORBITAL_CONFIG_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    const ExperimentConfig c = load_config(entry.path());
    CHECK(c.name == entry.path().stem().string());
    make_map(c);
    CHECK(make_shape(c.shape).size() > 0);
    ++n;
  }
  CHECK(n >= 15);
}

TEST_CASE("default julia window contains the filled set") {
  const RationalMap t(ComplexPoly({-1, 0, 1}));
  const Rect w = default_julia_window(t);
  CHECK(w.x1 >= 1.618);
  CHECK(w.x1 <= 3.0);
  CHECK(w.x0 == -w.x1);
}

TEST_CASE("common window") {
  const ScaleLadder l = ScaleLadder::dyadic(0, 14);
  const ScaleLadder w = common_window({l.with_window(2, 9), l.with_window(3, 12), l.with_window(1, 7)});
  CHECK(w.j_lo == 3);
  CHECK(w.j_hi == 7);
}

TEST_CASE("dimest report and lower bound") {
  const ExperimentConfig c = parse_config(kSmall);
  const VerificationReport r = run_dimest(c);
  CHECK(r.orbit_levels == 7);
  CHECK(r.assumption_a.verdict == Verdict3::pass);
  const double m = std::max(r.dim_e.report.estimate, r.dim_j.report.estimate);
  CHECK(r.dim_o.report.estimate >= r.dim_e.report.estimate - r.combined_uncertainty);
  const RationalMap t = make_map(c);
  const PointCloud e = make_shape(c.shape);
  const PointCloud o = orbital_cloud(build_orbit(c, t, e));
  for (int j = 0; j <= 10; ++j) {
    const double d = std::ldexp(1.0, -j);
    CHECK(grid_count(e.points(), d, o.bbox().x0 + Complex{0, o.bbox().y0}) <=
          grid_count(o.points(), d, o.bbox().x0 + Complex{0, o.bbox().y0}));
  }
  CHECK(r.formula_gap == doctest::Approx(r.dim_o.report.estimate - m));
  CHECK(r.consistent == (std::abs(r.formula_gap) <= r.combined_uncertainty));
  const io::json j = to_json(r);
  for (const char* key : {"name", "dim_E", "dim_J", "dim_O", "formula_gap", "combined_uncertainty", "verdict",
                          "assumption_a", "postcritical", "orbit"})
    CHECK(j.contains(key));
}

TEST_CASE("reports are byte-identical across runs") {
  const ExperimentConfig c = parse_config(kSmall);
  const std::string a = to_json(run_dimest(c)).dump(2);
  const std::string b = to_json(run_dimest(c)).dump(2);
  CHECK(a == b);
  ExperimentConfig threaded = c;
  threaded.threads = 3;
  CHECK(to_json(run_dimest(threaded)).dump(2) == a);
}

TEST_CASE("preimage dimension preservation") {
  const RationalMap t(ComplexPoly({-1, 0, 1}));
  const PointCloud e = shapes::circle_cloud({2, 2}, 1.0, 100000);
  TreeOptions o;
  o.depth = 1;
  const OrbitCloud tree = backward_tree(t, e, o);
  const PointCloud pre = orbital_cloud(tree, 1).with_spacing(e.spacing());
  const ScaleLadder ladder = ScaleLadder::dyadic(0, 14);
  const double de = dim_estimate(e, default_window(e, ladder, false)).estimate;
  const double dp = dim_estimate(pre, default_window(pre, ladder, false)).estimate;
  CHECK(std::abs(de - dp) <= 0.05);
}

TEST_CASE("targets") {
  VerificationReport r;
  r.dim_o.report.estimate = 0.69;
  r.dim_j.report.estimate = 0.46;
  r.dim_e.report.estimate = 0.5;
  r.consistent = false;
  r.assumption_a.verdict = Verdict3::fail;
  Targets t;
  t.dim_o = std::pair{0.597, 0.737};
  t.dim_j_max = 0.62;
  t.verdict = "INCONSISTENT";
  t.assumption_a = "FAIL";
  t.gap_o_e_min = 0.5;
  const auto checks = check_targets(t, r);
  REQUIRE(checks.size() == 5);
  CHECK(checks[0].ok);
  CHECK(checks[1].ok);
  CHECK_FALSE(checks[2].ok);
  CHECK(checks[3].ok);
  CHECK(checks[4].ok);
}

TEST_CASE("io formats") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.5e-300) == "-2.5e-300");
  const PointCloud c = shapes::points_cloud({Complex{0.5, -1}, Complex{2, 0}});
  CHECK(io::cloud_csv(c) == "re,im\n0.5,-1\n2,0\n");

  const fs::path dir = fs::temp_directory_path() / "orbital_io_test";
  fs::remove_all(dir);
  io::GreyImage img{3, 2, {0, 1, 2, 3, 4, 5}};
  io::write_pgm(dir / "a.pgm", img);
  const std::string pgm = slurp(dir / "a.pgm");
  CHECK(pgm.substr(0, 11) == "P5\n3 2\n255\n");
  CHECK(pgm.size() == 11 + 6);
  io::write_png(dir / "a.png", img);
  const std::string png = slurp(dir / "a.png");
  CHECK(png.substr(1, 3) == "PNG");
  fs::remove_all(dir);
}

TEST_CASE("render with depth 0 shows E alone") {
  ExperimentConfig c = parse_config(kSmall);
  c.depth = 0;
  const RationalMap t = make_map(c);
  const OrbitCloud tree = build_orbit(c, t, make_shape(c.shape));
  CHECK(tree.levels() == 1);
  const io::GreyImage img = io::render_orbit(tree, 256);
  std::size_t dark = 0;
  for (auto px : img.pixels) dark += px == 0;
  CHECK(dark > 0);
  CHECK(img.width == 256);
}
