#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "fmb/errors.hpp"
#include "fmb/metric.hpp"
#include "fmb/rng.hpp"

using namespace fmb;

namespace {

std::vector<std::vector<double>> random_points(Rng& rng, std::size_t k, int d) {
  std::vector<std::vector<double>> pts(k, std::vector<double>(d));
  for (auto& p : pts)
    for (double& c : p) c = rng.next_double();
  return pts;
}

}  // namespace

TEST_CASE("build_space validates and caches the diameter") {
  const auto s = build_space({0, 3, 3, 0}, 2);
  CHECK(s.size() == 2);
  CHECK(s.diameter() == 3.0);

  // d(0,2) = 5 > d(0,1) + d(1,2) = 2.
  CHECK_THROWS_AS(build_space({0, 1, 5, 1, 0, 1, 5, 1, 0}, 3), MetricViolation);
  try {
    build_space({0, 1, 5, 1, 0, 1, 5, 1, 0}, 3);
  } catch (const MetricViolation& e) {
    CHECK(e.axiom == "triangle");
  }

  CHECK_THROWS_AS(build_space({0, 0, 0, 0}, 2), MetricViolation);   // coincident points
  CHECK_THROWS_AS(build_space({0, 1, 2, 0}, 2), MetricViolation);   // asymmetric
  CHECK_THROWS_AS(build_space({1, 2, 2, 1}, 2), MetricViolation);   // nonzero diagonal
  CHECK_THROWS_AS(build_space({0, 1, 1, 0}, 2, std::nullopt, 1), CardinalityOverflow);
}

TEST_CASE("euclidean diameter equals the exhaustive pairwise maximum") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto pts = random_points(rng, 4 + rep % 5, 2);
    const auto s = build_space_euclidean(pts);
    double expect = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        double sq = 0.0;
        for (std::size_t c = 0; c < pts[i].size(); ++c)
          sq += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
        expect = std::max(expect, std::sqrt(sq));
      }
    CHECK(s.diameter() == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("product space carries the sum metric") {
  const auto x = build_space_euclidean({{0.0}, {1.0}});
  const auto y = build_space_euclidean({{0.0}, {2.0}});
  const auto p = product_space(x, y);
  CHECK(p.size() == 4);
  // (0,0) has index 0, (1,2) has index 1*2+1 = 3.
  CHECK(p.dist(0, 3) == 3.0);
  CHECK(p.diameter() == x.diameter() + y.diameter());

  const auto singleton = build_space({0}, 1);
  const auto q = product_space(x, singleton);
  CHECK(q.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(q.dist(i, j) == x.dist(i, j));
}

TEST_CASE("product diameter identity on random factors") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = build_space_euclidean(random_points(rng, 3, 2));
    const auto y = build_space_euclidean(random_points(rng, 3, 2));
    const auto p = product_space(x, y);
    double expect = 0.0;
    for (std::size_t a = 0; a < 9; ++a)
      for (std::size_t b = 0; b < 9; ++b) expect = std::max(expect, p.dist(a, b));
    CHECK(p.diameter() == expect);
    CHECK(p.diameter() == x.diameter() + y.diameter());
  }
}

TEST_CASE("dyadic grids enumerate distinct machine points") {
  const auto g1 = dyadic_grid(1, 0, 1);
  CHECK(g1.axis == std::vector<double>{-1.0, 0.0, 1.0});

  const auto g2 = dyadic_grid(1, 1, 2);
  CHECK(g2.axis == std::vector<double>{-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0});
  CHECK(g2.diameter() == 4.0);
  CHECK(g2.axis_separation() == 0.5);

  const auto g3 = dyadic_grid(2, 0, 1);
  CHECK(g3.size() == 9);
  CHECK(g3.diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));

  // Negation symmetry of the axis.
  for (double v : g2.axis)
    CHECK(std::find(g2.axis.begin(), g2.axis.end(), -v) != g2.axis.end());

  // Representation-pair count (2^{p+1} M)^d exceeds the distinct count.
  CHECK(g2.log_representation_count() == doctest::Approx(std::log(8.0)));

  CHECK_THROWS_AS(dyadic_grid(3, 4, 1000), CardinalityOverflow);
}

TEST_CASE("grid is the cartesian power of its axis") {
  for (int d = 1; d <= 3; ++d)
    for (int p = 0; p <= 2; ++p) {
      const auto g = dyadic_grid(d, p, 2);
      const auto axis = dyadic_grid(1, p, 2).axis;
      std::size_t expect = 1;
      for (int c = 0; c < d; ++c) expect *= axis.size();
      REQUIRE(g.size() == expect);
      std::set<std::vector<double>> seen;
      for (std::size_t i = 0; i < g.size(); ++i) {
        std::vector<double> pt(g.point(i), g.point(i) + d);
        for (double c : pt)
          CHECK(std::find(axis.begin(), axis.end(), c) != axis.end());
        seen.insert(pt);
      }
      CHECK(seen.size() == expect);  // all tuples distinct
    }
}

TEST_CASE("rounding picks the nearest point, ties toward the smaller value") {
  const auto g = dyadic_grid(1, 0, 1);
  CHECK(g.axis[round_to_grid({0.3}, g)] == 0.0);
  CHECK(g.axis[round_to_grid({0.5}, g)] == 0.0);  // tie-break down
  CHECK(g.axis[round_to_grid({-0.5}, g)] == -1.0);

  const auto g2 = dyadic_grid(1, 1, 2);
  CHECK(g2.axis[round_to_grid({1.7}, g2)] == 2.0);

  // Idempotence on grid points.
  const auto g3 = dyadic_grid(2, 1, 2);
  for (std::size_t i = 0; i < g3.size(); ++i) {
    const std::vector<double> pt(g3.point(i), g3.point(i) + g3.d);
    CHECK(round_to_grid(pt, g3) == i);
  }
}

TEST_CASE("separation follows the convention for small subsets") {
  const auto g = dyadic_grid(1, 1, 2);
  const auto space = grid_space(g);
  // Points 0 and 0.5 sit at axis indices 3 and 4.
  CHECK(separation(space, {3, 4}) == 0.5);
  CHECK(separation(space, {3}) == 1.0);
  CHECK(separation(space, {}) == std::numeric_limits<double>::infinity());
  CHECK(separation(space, {0, 3, 4}) == 0.5);
}

TEST_CASE("greedy packing separates, audits maximality, and respects the cap") {
  Rng rng(2024);
  const auto p1 = greedy_packing(1, 0.5, rng, 20000);
  CHECK(p1.size() >= 1);
  CHECK(p1.size() <= 3);
  CHECK(p1.maximal);

  Rng rng2(9);
  const auto p2 = greedy_packing(2, 1.5, rng2, 5000);
  CHECK(p2.size() == 1);  // diameter sqrt(2) < 1.5

  Rng rng3(77);
  const auto p3 = greedy_packing(2, 0.5, rng3, 20000);
  CHECK(p3.size() >= 4);   // three radius-0.5 balls cannot cover the square
  CHECK(p3.size() <= 72);  // 3^d (sqrt(d)/delta)^d
  for (std::size_t i = 0; i < p3.size(); ++i)
    for (std::size_t j = i + 1; j < p3.size(); ++j) {
      double sq = 0.0;
      for (int c = 0; c < 2; ++c) {
        const double dd = p3.point(i)[c] - p3.point(j)[c];
        sq += dd * dd;
      }
      CHECK(std::sqrt(sq) >= 0.5);
    }

  CHECK_THROWS_AS(greedy_packing(2, 0.0, rng, 10), Error);
  CHECK_THROWS_AS(greedy_packing(2, -1.0, rng, 10), Error);
}

TEST_CASE("the maximality audit gives up when the budget cannot cover it") {
  // Separation so small that maximality needs ~1e4 points; a budget of 50
  // (hard cap 3200 draws) cannot reach 50 consecutive rejections first.
  Rng rng(13);
  CHECK_THROWS_AS(greedy_packing(2, 0.01, rng, 50), BudgetExhausted);
}

TEST_CASE("large spaces take the sampled triangle audit path") {
  Rng rng(606);
  const auto s = build_space_euclidean(random_points(rng, 100, 2));
  CHECK(s.size() == 100);
  CHECK(s.diameter() > 0.0);

  // A planted violation far above tolerance is still caught by sampling:
  // with d(0,j) huge for one j, a third of all triples witness it.
  std::vector<double> dist(100 * 100, 0.0);
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t j = 0; j < 100; ++j)
      if (i != j) dist[i * 100 + j] = 1.0;
  dist[0 * 100 + 1] = dist[1 * 100 + 0] = 50.0;
  CHECK_THROWS_AS(build_space(std::move(dist), 100), MetricViolation);
}

TEST_CASE("restrict_space keeps distances and coordinates") {
  Rng rng(4);
  const auto s = build_space_euclidean(random_points(rng, 6, 2));
  const auto r = restrict_space(s, {1, 3, 5});
  CHECK(r.size() == 3);
  CHECK(r.dist(0, 1) == s.dist(1, 3));
  CHECK(r.has_coords());
  CHECK(r.coords(2)[0] == s.coords(5)[0]);
}
