#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "orbital/dimension.hpp"
#include "orbital/shapes.hpp"

using namespace orbital;
using namespace orbital::shapes;

namespace {

bool has(const PointCloud& c, Complex z, double tol = 1e-12) {
  for (const Complex& p : c.points())
    if (std::abs(p - z) <= tol) return true;
  return false;
}

double fixture_dim(const PointCloud& c) {
  const ScaleLadder ladder = ScaleLadder::dyadic(0, 14);
  return dim_estimate(c, default_window(c, ladder, false)).estimate;
}

// bbox containment and the declared spacing against measured nearest-neighbour gaps
void check_generator(const PointCloud& c) {
  for (const Complex& z : c.points()) CHECK(c.bbox().contains(z));
  CHECK(max_nearest_neighbor_gap(c.points()) <= 2.0 * c.spacing() + 1e-12);
}

}  // namespace

TEST_CASE("circle examples") {
  const PointCloud c = circle_cloud({2, 2}, 1.0, 4);
  REQUIRE(c.size() == 4);
  for (Complex z : {Complex{3, 2}, Complex{2, 3}, Complex{1, 2}, Complex{2, 1}}) CHECK(has(c, z));
  const PointCloud b = circle_cloud({0, 0}, 0.2, 2048);
  for (const Complex& z : b.points()) CHECK(std::abs(std::abs(z) - 0.2) < 1e-14);
  check_generator(b);
  CHECK(fixture_dim(circle_cloud({2, 2}, 1.0, 100000)) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("segment examples") {
  const PointCloud s = segment_cloud(0.0, 1.0, 3);
  REQUIRE(s.size() == 3);
  CHECK(has(s, 0.0));
  CHECK(has(s, 0.5));
  CHECK(has(s, 1.0));
  const PointCloud v = segment_cloud(0.0, Complex{0, 1}, 2);
  REQUIRE(v.size() == 2);
  CHECK(has(v, 0.0));
  CHECK(has(v, Complex{0, 1}));
  const PointCloud big = segment_cloud(0.0, 1.0, 100000);
  check_generator(big);
  CHECK(std::abs(fixture_dim(big) - 1.0) <= 0.05);
}

TEST_CASE("graded segment reaches the endpoint geometrically") {
  SegmentOptions o;
  o.grading = Grading::geometric;
  o.geometric_floor = 1e-300;
  const PointCloud s = segment_cloud(0.0, 1.0, 10000, o);
  CHECK(s.size() == 10000);
  double smallest = 1.0;
  for (const Complex& z : s.points())
    if (z != Complex{}) smallest = std::min(smallest, std::abs(z));
  CHECK(smallest < 1e-250);
  CHECK(has(s, 0.0));
  CHECK(has(s, 1.0));
}

TEST_CASE("ifs examples") {
  const PointCloud one = ifs_cloud(sierpinski_maps(), 1);
  REQUIRE(one.size() == 3);
  for (const auto& m : sierpinski_maps()) CHECK(has(one, m.shift));

  const PointCloud s = ifs_cloud(sierpinski_maps(), 10);
  CHECK(s.size() == 59049);
  check_generator(s);
  CHECK(std::abs(fixture_dim(s) - std::log(3.0) / std::log(2.0)) <= 0.07);

  const PointCloud v = ifs_cloud(vicsek_maps(), 7);
  CHECK(v.size() == 78125);
  check_generator(v);
  CHECK(std::abs(fixture_dim(v) - std::log(5.0) / std::log(3.0)) <= 0.07);
}

TEST_CASE("sequence examples") {
  const PointCloud s = sequence_cloud(0.0, 1.0, 4);
  REQUIRE(s.size() == 5);
  for (double x : {1.0, 0.5, 1.0 / 3.0, 0.25, 0.0}) CHECK(has(s, x));
  CHECK(std::abs(fixture_dim(sequence_cloud(6.0, 1.0, 1000000)) - 0.5) <= 0.07);
  CHECK(std::abs(fixture_dim(sequence_cloud(0.0, 2.0, 1000000)) - 1.0 / 3.0) <= 0.07);
  const PointCloud a = sequence_cloud(6.0, 1.0, 10);
  REQUIRE(a.anchored().has_value());
  CHECK(a.anchored()->anchor == Complex{6.0, 0.0});
}

TEST_CASE("product sequence examples") {
  CHECK(product_sequence_cloud(0.0, 1.0, 1).size() == 4);
  CHECK(std::abs(fixture_dim(product_sequence_cloud(0.0, 1.0, 1000)) - 1.0) <= 0.08);
  CHECK(std::abs(fixture_dim(product_sequence_cloud(0.0, 3.0, 1000)) - 0.5) <= 0.08);
}

TEST_CASE("points cloud") {
  const PointCloud p = points_cloud({{1, 2}, {3, 4}});
  CHECK(p.size() == 2);
  CHECK(p.spacing() == 1e-12);
}
