#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "orbital/errors.hpp"
#include "orbital/roots.hpp"

using namespace orbital;

namespace {

ComplexPoly poly(std::initializer_list<Complex> c) { return ComplexPoly(std::vector<Complex>(c)); }

double matched_distance(const RootSet& a, const RootSet& b) {
  std::vector<Complex> x, y;
  for (const auto& r : a.roots)
    for (int m = 0; m < r.multiplicity; ++m) x.push_back(r.value);
  for (const auto& r : b.roots)
    for (int m = 0; m < r.multiplicity; ++m) y.push_back(r.value);
  REQUIRE(x.size() == y.size());
  std::vector<std::size_t> perm(y.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  double best = INFINITY;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("solve_polynomial examples") {
  const RootSet a = solve_polynomial(poly({-1, 0, 1}), 1e-14, 500);
  REQUIRE(a.size() == 2);
  CHECK(std::abs(a.roots[0].value + 1.0) < 1e-12);
  CHECK(std::abs(a.roots[1].value - 1.0) < 1e-12);
  CHECK(a.roots[0].multiplicity == 1);

  const RootSet b = solve_polynomial(poly({0, 0, 1}), 1e-14, 500);
  REQUIRE(b.size() == 1);
  CHECK(b.roots[0].value == Complex{});
  CHECK(b.roots[0].multiplicity == 2);

  const RootSet c = solve_polynomial(poly({1, 0, 0, 4}), 1e-14, 500);
  REQUIRE(c.size() == 3);
  for (const auto& r : c.roots) CHECK(std::abs(4.0 * std::pow(r.value, 3) + 1.0) <= 1e-10);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(std::abs(c.roots[i].value - c.roots[j].value) > 1e-3);
}

TEST_CASE("solve_polynomial errors") {
  CHECK_THROWS_AS(solve_polynomial(ComplexPoly::constant(3.0), 1e-14, 500), DegenerateError);
}

TEST_CASE("cauchy radius bounds every root") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> c;
    for (int i = 0; i < 9; ++i) c.emplace_back(g(rng), g(rng));
    const ComplexPoly p(c);
    const double r = cauchy_root_radius(p);
    for (const auto& root : solve_polynomial(p, RootOptions{}).roots) CHECK(std::abs(root.value) <= r * (1 + 1e-9));
  }
}

TEST_CASE("multiplicities sum to the degree") {
  const ComplexPoly p = poly({-1, 0, 1}) * poly({-1, 0, 1}) * poly({2, 1});
  const RootSet s = solve_polynomial(p, RootOptions{});
  CHECK(s.total_multiplicity() == 5);
  CHECK(s.size() == 3);
}

TEST_CASE("preimages examples") {
  const RootSet a = preimages(RationalMap(poly({0, 0, 1})), 1.0);
  REQUIRE(a.size() == 2);
  CHECK(std::abs(a.roots[0].value + 1.0) < 1e-12);
  CHECK(std::abs(a.roots[1].value - 1.0) < 1e-12);

  const RationalMap t6(poly({6, 0, 1}));
  const RootSet b = preimages(t6, 6.25);
  REQUIRE(b.size() == 2);
  CHECK(std::abs(b.roots[0].value + 0.5) < 1e-12);
  CHECK(std::abs(b.roots[1].value - 0.5) < 1e-12);

  const RootSet c = preimages(t6, 6.0);
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c.roots[0].value) < 1e-12);
  CHECK(c.roots[0].multiplicity == 2);
}

TEST_CASE("fiber at infinity") {
  // (z^2 + 1) / (z^2 - 1) over w = 1 loses degree
  const RationalMap t(poly({1, 0, 1}), poly({-1, 0, 1}));
  CHECK_THROWS_AS(preimages(t, 1.0), FiberDegreeError);
}

TEST_CASE("preimages_near keeps tiny offsets") {
  const RationalMap t(poly({20, 0, 0, 0, 0, 0, 0, 0, 1}));
  const Complex offset{1e-20, 0.0};
  const RootSet s = preimages_near(t, 20.0, offset);
  REQUIRE(s.size() == 8);
  for (const auto& r : s.roots) CHECK(std::abs(std::abs(r.value) - std::pow(1e-20, 1.0 / 8.0)) < 1e-12);
}

TEST_CASE("round trip on random fibers of the bundled maps") {
  const RationalMap maps[] = {
      RationalMap(poly({0, 0, 1})),
      RationalMap(poly({-1, 0, 1})),
      RationalMap(poly({6, 0, 1})),
      RationalMap(poly({0, 1, 0, 0, 1})),
      RationalMap(poly({{3 * std::sqrt(2.0), 3 * std::sqrt(2.0)}, 0, 1})),
      RationalMap(poly({20, 0, 0, 0, 0, 0, 0, 0, 1})),
  };
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const auto& t : maps) {
    double worst = 0.0;
    int total = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const Complex w{u(rng), u(rng)};
      const RootSet s = preimages(t, w);
      total = s.total_multiplicity();
      CHECK(total == t.degree());
      for (const auto& r : s.roots) worst = std::max(worst, std::abs(map_eval(t, r.value) - w) / (1.0 + std::abs(w)));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("perturbation stability") {
  const RationalMap t(poly({0, 0, 1}));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Complex w{u(rng), u(rng)};
    CHECK(matched_distance(preimages(t, w), preimages(t, w + 1e-9)) <= 1e-4);
  }
}

TEST_CASE("determinism and ordering") {
  const RationalMap t(poly({0, 1, 0, 0, 1}));
  const RootSet a = preimages(t, Complex{0.3, -0.7});
  const RootSet b = preimages(t, Complex{0.3, -0.7});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.roots[i].value == b.roots[i].value);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(lex_less(a.roots[i - 1].value, a.roots[i].value));
}
