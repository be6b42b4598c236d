#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "fmb/errors.hpp"
#include "fmb/metric.hpp"
#include "fmb/rng.hpp"
#include "fmb/transport.hpp"
#include "oracles.hpp"

using namespace fmb;

namespace {

FiniteMetricSpace random_line_space(Rng& rng, std::size_t k) {
  std::vector<std::vector<double>> pts(k, std::vector<double>(1));
  for (auto& p : pts) p[0] = rng.next_double();
  std::sort(pts.begin(), pts.end());
  // Collisions are measure zero but keep the metric valid anyway.
  for (std::size_t i = 1; i < k; ++i)
    if (pts[i][0] <= pts[i - 1][0]) pts[i][0] = pts[i - 1][0] + 1e-9;
  return build_space_euclidean(pts);
}

DiscreteMeasure random_measure(Rng& rng, const FiniteMetricSpace& space) {
  std::vector<double> w(space.size());
  double total = 0.0;
  for (double& x : w) total += (x = rng.next_double());
  for (double& x : w) x /= total;
  return make_measure(space, w);
}

void check_marginals(const Coupling& c, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  for (std::size_t i = 0; i < c.k; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < c.k; ++j) {
      row += c.entry(i, j);
      col += c.entry(j, i);
    }
    CHECK(row == doctest::Approx(mu.weights[i]).epsilon(1e-9));
    CHECK(col == doctest::Approx(nu.weights[i]).epsilon(1e-9));
  }
}

}  // namespace

TEST_CASE("two diracs transport along their distance") {
  const auto s = build_space_euclidean({{0.0}, {0.4}, {1.0}});
  const auto mu = dirac(s, 0);
  const auto nu = dirac(s, 2);
  const auto r = wasserstein_exact(mu, nu);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.coupling.entry(0, 2) == doctest::Approx(1.0));
  check_marginals(r.coupling, mu, nu);
}

TEST_CASE("shifted mass on the line {0,1,2} costs one") {
  const auto s = build_space_euclidean({{0.0}, {1.0}, {2.0}});
  const auto mu = make_measure(s, {0.5, 0.5, 0.0});
  const auto nu = make_measure(s, {0.0, 0.5, 0.5});
  CHECK(wasserstein_exact(mu, nu).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(wasserstein_1d_oracle(mu, nu) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(tv_distance(mu, nu) == doctest::Approx(0.5));
}

TEST_CASE("identical measures cost zero with a diagonal plan") {
  Rng rng(21);
  const auto s = random_line_space(rng, 5);
  const auto mu = random_measure(rng, s);
  const auto r = wasserstein_exact(mu, mu);
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(r.coupling.entry(i, i) == doctest::Approx(mu.weights[i]).epsilon(1e-9));
  CHECK(wasserstein_1d_oracle(mu, mu) == 0.0);
  CHECK(tv_distance(mu, mu) == 0.0);
}

TEST_CASE("1d oracle handles diracs and preconditions") {
  const auto s = build_space_euclidean({{0.0}, {3.0}});
  CHECK(wasserstein_1d_oracle(dirac(s, 0), dirac(s, 1)) == doctest::Approx(3.0));

  const auto cycle = build_space({0, 1, 1, 0}, 2);
  CHECK_THROWS_AS(wasserstein_1d_oracle(dirac(cycle, 0), dirac(cycle, 1)), NotOneDimensional);
}

TEST_CASE("tv distance on disjoint diracs is one") {
  const auto s = build_space_euclidean({{0.0}, {1.0}});
  CHECK(tv_distance(dirac(s, 0), dirac(s, 1)) == doctest::Approx(1.0));
}

TEST_CASE("mismatched spaces are rejected") {
  const auto a = build_space_euclidean({{0.0}, {1.0}});
  const auto b = build_space_euclidean({{0.0}, {1.0}, {2.0}});
  CHECK_THROWS_AS(wasserstein_exact(dirac(a, 0), dirac(b, 0)), MarginalMismatch);
  CHECK_THROWS_AS(tv_distance(dirac(a, 0), dirac(b, 0)), MarginalMismatch);
}

TEST_CASE("solver agrees with the 1d oracle on random lines") {
  Rng rng(1234);
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = random_line_space(rng, 2 + rng.uniform_int(30));
    const auto mu = random_measure(rng, s);
    const auto nu = random_measure(rng, s);
    const auto r = wasserstein_exact(mu, nu);
    const double oracle = wasserstein_1d_oracle(mu, nu);
    CHECK(std::fabs(r.value - oracle) <= 1e-9);
    CHECK(std::fabs(r.coupling.objective(s) - r.value) <= 1e-9);
    check_marginals(r.coupling, mu, nu);
  }
}

TEST_CASE("solver agrees with the vertex-enumeration oracle on tiny spaces") {
  Rng rng(99);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t k = 2 + rng.uniform_int(3);
    std::vector<std::vector<double>> pts(k, std::vector<double>(2));
    for (auto& p : pts)
      for (double& c : p) c = rng.next_double();
    const auto s = build_space_euclidean(pts);
    const auto mu = random_measure(rng, s);
    const auto nu = random_measure(rng, s);
    const double exact = wasserstein_exact(mu, nu).value;
    const double oracle = test::wasserstein_vertex_oracle(mu, nu);
    CHECK(std::fabs(exact - oracle) <= 1e-9);
  }
}

TEST_CASE("integer pivoting matches double pivoting") {
  Rng rng(31);
  WassersteinOptions exact_opts;
  exact_opts.integer_pivoting = true;
  for (int rep = 0; rep < 30; ++rep) {
    const auto s = random_line_space(rng, 2 + rng.uniform_int(12));
    const auto mu = random_measure(rng, s);
    const auto nu = random_measure(rng, s);
    const double a = wasserstein_exact(mu, nu).value;
    const double b = wasserstein_exact(mu, nu, exact_opts).value;
    CHECK(std::fabs(a - b) <= 1e-8);
  }
}

TEST_CASE("wasserstein is a metric on measures") {
  Rng rng(7);
  const auto s = random_line_space(rng, 8);
  for (int rep = 0; rep < 40; ++rep) {
    const auto a = random_measure(rng, s);
    const auto b = random_measure(rng, s);
    const auto c = random_measure(rng, s);
    const double ab = wasserstein_exact(a, b).value;
    const double ba = wasserstein_exact(b, a).value;
    const double bc = wasserstein_exact(b, c).value;
    const double ac = wasserstein_exact(a, c).value;
    CHECK(std::fabs(ab - ba) <= 1e-9);
    CHECK(ac <= ab + bc + 1e-9);
    // W <= diam * TV.
    CHECK(ab <= s.diameter() * tv_distance(a, b) + 1e-9);
  }
}

TEST_CASE("the returned coupling is deterministic") {
  Rng rng(61);
  const auto s = random_line_space(rng, 12);
  const auto mu = random_measure(rng, s);
  const auto nu = random_measure(rng, s);
  const auto a = wasserstein_exact(mu, nu);
  const auto b = wasserstein_exact(mu, nu);
  CHECK(a.value == b.value);
  CHECK(a.coupling.matrix == b.coupling.matrix);
}

TEST_CASE("sampling is reproducible and empirical weights count correctly") {
  Rng rng(3);
  const auto s = random_line_space(rng, 4);
  const auto uni = uniform_measure(s);

  const auto batch1 = sample(uni, 8, 42);
  const auto batch2 = sample(uni, 8, 42);
  CHECK(batch1.indices == batch2.indices);

  const auto emp = empirical(s, batch1);
  double total = 0.0;
  for (double w : emp.weights) {
    total += w;
    CHECK(std::fabs(w * 8.0 - std::round(w * 8.0)) <= 1e-12);
  }
  CHECK(total == doctest::Approx(1.0));

  const auto degenerate = dirac(s, 2);
  const auto emp2 = empirical(s, sample(degenerate, 17, 5));
  CHECK(emp2.weights[2] == doctest::Approx(1.0));
}

TEST_CASE("graph pushforward places mass on the graph") {
  const auto x = build_space_euclidean({{0.0}, {1.0}});
  const auto y = build_space_euclidean({{0.0}, {0.5}, {1.0}});
  const auto product = product_space(x, y);
  const auto mu_x = uniform_measure(x);

  const auto constant = graph_pushforward(mu_x, {1, 1}, product, 3);
  CHECK(constant.weights[0 * 3 + 1] == doctest::Approx(0.5));
  CHECK(constant.weights[1 * 3 + 1] == doctest::Approx(0.5));

  const auto injective = graph_pushforward(mu_x, {0, 2}, product, 3);
  std::size_t support = 0;
  for (double w : injective.weights)
    if (w > 0.0) ++support;
  CHECK(support == x.size());

  // A noiseless law is supported exactly on the graph of the map.
  const std::vector<std::size_t> f{0, 2};
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (injective.weights[i * 3 + j] > 0.0) CHECK(j == f[i]);
  CHECK(tv_distance(injective, graph_pushforward(mu_x, f, product, 3)) == 0.0);

  CHECK_THROWS_AS(graph_pushforward(mu_x, {0}, product, 3), DomainMismatch);
  CHECK_THROWS_AS(graph_pushforward(mu_x, {0, 7}, product, 3), DomainMismatch);
}
