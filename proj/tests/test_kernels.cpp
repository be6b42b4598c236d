#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fmb/kernels.hpp"
#include "fmb/rng.hpp"

using namespace fmb;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = scale * (2.0 * rng.next_double() - 1.0);
  return v;
}

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

TEST_CASE("dispatched kernels match the scalar reference") {
  Rng rng(101);
  for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4},
                        std::size_t{7}, std::size_t{8}, std::size_t{15}, std::size_t{33},
                        std::size_t{64}, std::size_t{67}, std::size_t{257}}) {
    const auto a = random_vec(rng, n, 3.0);
    const auto b = random_vec(rng, n, 3.0);
    CHECK(close_rel(kernels::ops().dot(a.data(), b.data(), n),
                    kernels::scalar::dot(a.data(), b.data(), n), 1e-12));
    CHECK(close_rel(kernels::ops().sq_dist(a.data(), b.data(), n),
                    kernels::scalar::sq_dist(a.data(), b.data(), n), 1e-12));
    CHECK(close_rel(kernels::ops().sum(a.data(), n), kernels::scalar::sum(a.data(), n), 1e-12));
    CHECK(close_rel(kernels::ops().l1_dist(a.data(), b.data(), n),
                    kernels::scalar::l1_dist(a.data(), b.data(), n), 1e-12));
  }
}

TEST_CASE("matvec backends agree") {
  Rng rng(7);
  for (std::size_t rows : {std::size_t{1}, std::size_t{5}, std::size_t{17}}) {
    for (std::size_t cols : {std::size_t{1}, std::size_t{4}, std::size_t{13}, std::size_t{40}}) {
      const auto mat = random_vec(rng, rows * cols);
      const auto x = random_vec(rng, cols);
      std::vector<double> y1(rows), y2(rows);
      kernels::ops().matvec(mat.data(), rows, cols, x.data(), y1.data());
      kernels::scalar::matvec(mat.data(), rows, cols, x.data(), y2.data());
      for (std::size_t r = 0; r < rows; ++r) CHECK(close_rel(y1[r], y2[r], 1e-12));
    }
  }
}

TEST_CASE("kernels are deterministic within a backend") {
  Rng rng(55);
  const auto a = random_vec(rng, 123);
  const auto b = random_vec(rng, 123);
  const double first = kernels::ops().sq_dist(a.data(), b.data(), a.size());
  for (int r = 0; r < 5; ++r)
    CHECK(kernels::ops().sq_dist(a.data(), b.data(), a.size()) == first);
}

TEST_CASE("exact identities hold in every backend") {
  Rng rng(99);
  const auto a = random_vec(rng, 50);
  CHECK(kernels::ops().sq_dist(a.data(), a.data(), a.size()) == 0.0);
  CHECK(kernels::ops().l1_dist(a.data(), a.data(), a.size()) == 0.0);
  const std::vector<double> zeros(50, 0.0);
  CHECK(kernels::ops().dot(a.data(), zeros.data(), a.size()) == 0.0);
}

TEST_CASE("forcing the scalar backend routes through the reference") {
  const std::string original = kernels::backend_name();
  REQUIRE(kernels::force_backend("scalar"));
  Rng rng(3);
  const auto a = random_vec(rng, 37);
  const auto b = random_vec(rng, 37);
  CHECK(kernels::ops().dot(a.data(), b.data(), 37) ==
        kernels::scalar::dot(a.data(), b.data(), 37));
  CHECK(kernels::backend_name() == "scalar");
  CHECK(!kernels::force_backend("no-such-backend"));
  kernels::force_backend(original);
}

TEST_CASE("counter rng is reproducible and splits are independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng base(42);
  Rng s1 = base.split(1), s1_again = base.split(1), s2 = base.split(2);
  CHECK(s1.next_u64() == s1_again.next_u64());
  CHECK(s1.next_u64() != s2.next_u64());

  // Uniform doubles stay in [0,1) and normals have sane moments.
  Rng c(7);
  double mean = 0.0, var = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = c.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double g = c.normal();
    mean += g;
    var += g * g;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::fabs(mean) < 0.05);
  CHECK(std::fabs(var - 1.0) < 0.05);
}
