#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "orbital/dimension.hpp"
#include "orbital/errors.hpp"
#include "orbital/julia.hpp"
#include "orbital/orbit.hpp"
#include "orbital/shapes.hpp"

using namespace orbital;
using namespace orbital::shapes;

namespace {

ComplexPoly poly(std::initializer_list<Complex> c) { return ComplexPoly(std::vector<Complex>(c)); }

const RationalMap kSquare(poly({0, 0, 1}));

bool contains(std::span<const OrbitNode> level, Complex z, double tol = 1e-12) {
  return std::any_of(level.begin(), level.end(), [&](const OrbitNode& n) { return std::abs(n.point - z) <= tol; });
}

OrbitCloud tree_of(const RationalMap& t, const PointCloud& seeds, int depth, double cell = 0.0) {
  TreeOptions o;
  o.depth = depth;
  o.dedup_cell = cell;
  return backward_tree(t, seeds, o);
}

std::set<std::pair<long long, long long>> cells(const PointCloud& c, double cell) {
  std::set<std::pair<long long, long long>> out;
  for (const Complex& z : c.points())
    out.emplace(static_cast<long long>(std::floor(z.real() / cell)), static_cast<long long>(std::floor(z.imag() / cell)));
  return out;
}

}  // namespace

TEST_CASE("backward_tree examples") {
  const OrbitCloud a = tree_of(kSquare, points_cloud({1.0}), 2);
  REQUIRE(a.levels() == 3);
  CHECK(a.nodes.size() == 7);
  CHECK(a.level(1).size() == 2);
  CHECK(contains(a.level(1), 1.0));
  CHECK(contains(a.level(1), -1.0));
  CHECK(a.level(2).size() == 4);
  for (Complex z : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}}) CHECK(contains(a.level(2), z));

  const OrbitCloud b = tree_of(kSquare, points_cloud({2.0}), 1);
  REQUIRE(b.level(1).size() == 2);
  for (const auto& n : b.level(1)) {
    CHECK(std::abs(std::abs(n.point) - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(n.point.imag()) < 1e-12);
    CHECK(n.log_fwd_derivative == doctest::Approx(std::log(2.0 * std::sqrt(2.0))).epsilon(1e-13));
  }

  const RationalMap t6(poly({6, 0, 1}));
  const long long big_n = 50;
  const OrbitCloud c = tree_of(t6, sequence_cloud(6.0, 1.0, big_n), 1);
  const auto l1 = c.level(1);
  CHECK(l1.size() == 2 * big_n + 1);
  CHECK(contains(l1, 0.0));
  for (long long n = 1; n <= big_n; ++n) {
    const double x = std::sqrt(1.0 / static_cast<double>(n));
    CHECK(contains(l1, x, 1e-10));
    CHECK(contains(l1, -x, 1e-10));
  }
  for (const auto& n : l1)
    if (std::abs(n.point) < 1e-12) CHECK(is_degenerate(n));
}

TEST_CASE("orbital_cloud examples") {
  const OrbitCloud a = tree_of(kSquare, points_cloud({1.0}), 2);
  // 7 nodes over three levels, 4 distinct points
  CHECK(a.nodes.size() == 7);
  CHECK(orbital_cloud(a).size() == 4);
  TreeOptions o;
  o.depth = 2;
  o.dedup_cell = 1e-9;
  const OrbitCloud d = backward_tree(kSquare, points_cloud({1.0}), o);
  CHECK(d.nodes.size() == 7);
  CHECK(orbital_cloud(d).size() == 4);

  const OrbitCloud z = tree_of(kSquare, points_cloud({0.0}), 1);
  CHECK(z.nodes.size() == 2);
  CHECK(orbital_cloud(z).size() == 1);

  const OrbitCloud e = tree_of(kSquare, circle_cloud({2, 2}, 1.0, 4096), 10, std::ldexp(1.0, -16));
  const PointCloud oc = orbital_cloud(e);
  CHECK(oc.size() > 4096);
  const double bound = 2.0 * std::sqrt(2.0) + 1.0;
  for (const Complex& p : oc.points()) CHECK(std::abs(p) <= bound + 1e-9);
  for (int k = 1; k < e.levels(); ++k)
    for (const auto& n : e.level(k)) CHECK(std::abs(n.point) <= std::pow(bound, std::ldexp(1.0, -k)) + 1e-9);
}

TEST_CASE("node invariants") {
  const RationalMap t(poly({-1, 0, 1}));
  const OrbitCloud tr = tree_of(t, circle_cloud({2, 2}, 1.0, 64), 6);
  for (int k = 0; k < tr.levels(); ++k) {
    CHECK(tr.level(k).size() <= static_cast<std::size_t>(std::pow(2, k)) * 64);
    for (const auto& n : tr.level(k)) {
      CHECK(n.depth == k);
      const auto r = iterate_with_derivative(t, n.point, k);
      const Complex seed = tr.seeds[n.seed_index];
      CHECK(std::abs(r.point - seed) <= 1e-8 * (1.0 + std::abs(seed)));
      CHECK(std::abs(r.log_abs_derivative - n.log_fwd_derivative) <= 1e-9 * (1.0 + std::abs(r.log_abs_derivative)));
    }
  }
}

TEST_CASE("derivative consistency with finite differences") {
  const RationalMap maps[] = {RationalMap(poly({-1, 0, 1})), RationalMap(poly({0, 1, 0, 0, 1}))};
  for (const auto& t : maps) {
    const OrbitCloud tr = tree_of(t, circle_cloud({2, 2}, 1.0, 16), 6);
    for (const auto& n : tr.nodes) {
      if (n.depth == 0 || n.log_fwd_derivative <= std::log(0.1)) continue;
      const double h = 1e-4 * std::exp(-n.log_fwd_derivative);
      Complex a = n.point + h, b = n.point - h;
      for (int k = 0; k < n.depth; ++k) {
        a = map_eval(t, a);
        b = map_eval(t, b);
      }
      const double fd = std::log(std::abs((a - b) / (2.0 * h)));
      CHECK(std::abs(fd - n.log_fwd_derivative) <= 1e-3);
    }
  }
}

TEST_CASE("dedup keeps one node per cell per level") {
  const RationalMap t(poly({-1, 0, 1}));
  const double cell = 1.0 / 64.0;
  const OrbitCloud tr = tree_of(t, circle_cloud({2, 2}, 1.0, 2048), 8, cell);
  for (int k = 0; k < tr.levels(); ++k) {
    std::set<std::pair<long long, long long>> seen;
    for (const auto& n : tr.level(k)) {
      const auto key = std::make_pair(static_cast<long long>(std::floor(n.point.real() / cell)),
                                      static_cast<long long>(std::floor(n.point.imag() / cell)));
      CHECK(seen.insert(key).second);
    }
  }
}

TEST_CASE("order independence") {
  const RationalMap t(poly({-1, 0, 1}));
  const PointCloud e = circle_cloud({2, 2}, 1.0, 512);
  std::vector<Complex> shuffled = e.points();
  std::mt19937_64 rng(4);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const double cell = std::ldexp(1.0, -12);
  const PointCloud a = orbital_cloud(tree_of(t, e, 8, cell));
  const PointCloud b = orbital_cloud(tree_of(t, PointCloud(shuffled, e.spacing()), 8, cell));
  CHECK(cells(a, cell) == cells(b, cell));
}

TEST_CASE("thread count does not change the tree") {
  const RationalMap t(poly({-1, 0, 1}));
  TreeOptions o;
  o.depth = 9;
  o.dedup_cell = std::ldexp(1.0, -14);
  const PointCloud e = circle_cloud({2, 2}, 1.0, 4096);
  const OrbitCloud a = backward_tree(t, e, o);
  o.threads = 4;
  const OrbitCloud b = backward_tree(t, e, o);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].point == b.nodes[i].point);
    CHECK(a.nodes[i].log_fwd_derivative == b.nodes[i].log_fwd_derivative);
  }
}

TEST_CASE("budget truncation") {
  TreeOptions o;
  o.depth = 20;
  o.budget = 1000;
  const OrbitCloud tr = backward_tree(kSquare, points_cloud({2.0}), o);
  CHECK(tr.truncated);
  CHECK(tr.visits <= 1000);
  CHECK(tr.levels() < 21);
}

TEST_CASE("level_sum examples") {
  const OrbitCloud tr = tree_of(kSquare, points_cloud({2.0}), 3);
  CHECK(level_sum(tr, 1.0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(level_sum(tr, 1.0, 3) == doctest::Approx(std::pow(2.0, -7.0 / 8.0)).epsilon(1e-12));
  for (int k = 0; k <= 3; ++k) CHECK(level_sum(tr, 0.0, k) == doctest::Approx(std::pow(2.0, k)));
  CHECK(log_level_sum(tr, 1.0, 3) == doctest::Approx(-7.0 / 8.0 * std::log(2.0)).epsilon(1e-12));
  const OrbitCloud two = tree_of(kSquare, points_cloud({2.0, 3.0}), 1);
  CHECK_THROWS_AS(level_sum(two, 1.0, 1), PreconditionError);
}

TEST_CASE("hz_exponent examples") {
  for (double z : {2.0, 3.0}) {
    const ExponentEstimate h = hz_exponent(kSquare, z, 12, 0.05, 4.0, 40);
    CHECK(std::abs(h.value - 1.0) <= 0.1);
    CHECK(h.uncertainty < 1e-6);
  }
  CHECK_THROWS_AS(hz_exponent(kSquare, 2.0, 12, 1.5, 4.0, 40), BracketError);
}

TEST_CASE("hz_exponent closed form growth") {
  const OrbitCloud tr = tree_of(kSquare, points_cloud({2.0}), 12);
  for (double s : {0.5, 1.0, 2.0}) CHECK(level_growth_rate(tr, s) == doctest::Approx((1.0 - s) * std::log(2.0)).epsilon(0.02));
}

TEST_CASE("derivative_band_count examples") {
  const OrbitCloud tr = tree_of(kSquare, points_cloud({2.0}), 8);
  CHECK(derivative_band_count(tr, 3) == 8);
  CHECK(derivative_band_count(tr, -5) == 0);
  const OrbitCloud zero = tree_of(kSquare, points_cloud({2.0}), 0);
  CHECK(derivative_band_count(zero, 0) == 1);

  std::size_t total = 0, nonneg = 0;
  for (int n = -2; n <= 20; ++n) total += derivative_band_count(tr, n);
  for (const auto& n : tr.nodes)
    if (n.log_fwd_derivative >= 0.0) ++nonneg;
  CHECK(total == nonneg);
}

TEST_CASE("band count partitions the non-negative nodes") {
  const RationalMap t(poly({-1, 0, 1}));
  const OrbitCloud tr = tree_of(t, circle_cloud({2, 2}, 1.0, 64), 7);
  std::size_t total = 0, nonneg = 0;
  for (int n = 0; n <= 200; ++n) total += derivative_band_count(tr, n);
  for (const auto& n : tr.nodes)
    if (n.log_fwd_derivative >= 0.0) ++nonneg;
  CHECK(total == nonneg);
}

TEST_CASE("band count trend against the Julia box count") {
  const OrbitCloud tr = tree_of(kSquare, points_cloud({2.0}), 10);
  const JuliaCloud j = julia_backward(kSquare, 2.0, 14, std::ldexp(1.0, -16));
  std::vector<double> ratios;
  for (int n = 3; n <= 10; ++n) {
    const double band = static_cast<double>(derivative_band_count(tr, n));
    const double boxes = static_cast<double>(box_count(j.cloud, std::ldexp(1.0, -n)));
    ratios.push_back(band / boxes);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  CHECK(*hi / *lo <= 4.0);
}

TEST_CASE("looks_fatou") {
  CHECK(looks_fatou(kSquare, 0.5));
  CHECK(looks_fatou(kSquare, 2.0));
  CHECK(looks_fatou(RationalMap(poly({-1, 0, 1})), 0.1));
  CHECK_FALSE(looks_fatou(kSquare, std::polar(1.0, 1.0)));
  CHECK_FALSE(looks_fatou(RationalMap(poly({-2, 0, 1})), 0.3));
  CHECK_THROWS_AS(hz_exponent(kSquare, std::polar(1.0, 1.0), 12, 0.05, 4.0, 40), PreconditionError);
}
