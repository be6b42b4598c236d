#include "fmb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fmb/errors.hpp"
#include "fmb/kernels.hpp"
#include "fmb/network_simplex.hpp"

namespace fmb {

namespace {

void require_same_space(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.space != nu.space || mu.size() != nu.size())
    throw MarginalMismatch("measures live on different spaces");
}

}  // namespace

DiscreteMeasure make_measure(const FiniteMetricSpace& space, std::vector<double> weights) {
  if (weights.size() != space.size())
    throw MarginalMismatch("weight vector length differs from point count");
  for (double w : weights)
    if (!(w >= 0.0)) throw Error("measure weights must be non-negative");
  const double total = kernels::ops().sum(weights.data(), weights.size());
  if (std::fabs(total - 1.0) > 1e-12)
    throw Error("measure weights sum to " + std::to_string(total) + ", expected 1");
  return DiscreteMeasure{&space, std::move(weights)};
}

DiscreteMeasure dirac(const FiniteMetricSpace& space, std::size_t point) {
  std::vector<double> w(space.size(), 0.0);
  w.at(point) = 1.0;
  return DiscreteMeasure{&space, std::move(w)};
}

DiscreteMeasure uniform_measure(const FiniteMetricSpace& space) {
  std::vector<double> w(space.size(), 1.0 / static_cast<double>(space.size()));
  return DiscreteMeasure{&space, std::move(w)};
}

double Coupling::objective(const FiniteMetricSpace& space) const {
  return kernels::ops().dot(matrix.data(), space.dist_matrix().data(), matrix.size());
}

WassersteinResult wasserstein_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const WassersteinOptions& options) {
  require_same_space(mu, nu);
  const FiniteMetricSpace& space = *mu.space;
  const std::size_t k = space.size();

  // Supports after pruning zero-weight points.
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < k; ++i)
    if (mu.weights[i] > 0.0) rows.push_back(i);
  for (std::size_t j = 0; j < k; ++j)
    if (nu.weights[j] > 0.0) cols.push_back(j);

  WassersteinResult out;
  out.coupling.row_marginal = &mu;
  out.coupling.col_marginal = &nu;
  out.coupling.k = k;
  out.coupling.matrix.assign(k * k, 0.0);

  const std::size_t n = rows.size(), m = cols.size();
  std::vector<double> supply(n), demand(m);
  for (std::size_t a = 0; a < n; ++a) supply[a] = mu.weights[rows[a]];
  for (std::size_t b = 0; b < m; ++b) demand[b] = nu.weights[cols[b]];

  std::vector<double> cost(n * m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < m; ++b) cost[a * m + b] = space.dist(rows[a], cols[b]);

  std::vector<double> flows;
  if (options.integer_pivoting && space.diameter() > 0.0) {
    const double scale = std::ldexp(1.0, 32) / space.diameter();
    std::vector<std::int64_t> icost(n * m);
    for (std::size_t e = 0; e < cost.size(); ++e)
      icost[e] = static_cast<std::int64_t>(std::llround(cost[e] * scale));
    TransportSimplex<std::int64_t> solver(n, m, std::move(icost), supply, demand, 0);
    solver.solve();
    flows = solver.flows();
  } else {
    double cmax = 0.0;
    for (double c : cost) cmax = std::max(cmax, c);
    TransportSimplex<double> solver(n, m, cost, supply, demand,
                                    options.tolerance * std::max(1.0, cmax));
    solver.solve();
    flows = solver.flows();
  }

  double value = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const double f = flows[a * m + b];
      if (f > 0.0) {
        out.coupling.matrix[rows[a] * k + cols[b]] = f;
        value += f * cost[a * m + b];
      }
    }
  out.value = value;
  return out;
}

double wasserstein_1d_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_space(mu, nu);
  const FiniteMetricSpace& space = *mu.space;
  if (!space.has_coords() || space.coord_dim() != 1) throw NotOneDimensional();

  const std::size_t k = space.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return space.coords(a)[0] < space.coords(b)[0]; });

  // integral |F_mu - F_nu| over the line.
  double value = 0.0, cdf_gap = 0.0;
  for (std::size_t t = 0; t + 1 < k; ++t) {
    cdf_gap += mu.weights[order[t]] - nu.weights[order[t]];
    value += std::fabs(cdf_gap) * (space.coords(order[t + 1])[0] - space.coords(order[t])[0]);
  }
  return value;
}

double tv_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_space(mu, nu);
  return 0.5 * kernels::ops().l1_dist(mu.weights.data(), nu.weights.data(), mu.size());
}

SampleBatch sample(const DiscreteMeasure& mu, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw Error("sample size must be >= 1");
  std::vector<double> cdf(mu.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    acc += mu.weights[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  SampleBatch batch;
  batch.seed = seed;
  batch.indices.resize(n);
  Rng rng(seed);
  for (std::size_t t = 0; t < n; ++t) {
    const double u = rng.next_double();
    batch.indices[t] = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    if (batch.indices[t] >= mu.size()) batch.indices[t] = mu.size() - 1;
  }
  return batch;
}

DiscreteMeasure empirical(const FiniteMetricSpace& space, const SampleBatch& batch) {
  std::vector<double> w(space.size(), 0.0);
  const double inc = 1.0 / static_cast<double>(batch.N());
  for (std::size_t idx : batch.indices) w.at(idx) += inc;
  return DiscreteMeasure{&space, std::move(w)};
}

DiscreteMeasure graph_pushforward(const DiscreteMeasure& mu_x,
                                  const std::vector<std::size_t>& f,
                                  const FiniteMetricSpace& product, std::size_t k_y) {
  const std::size_t k_x = mu_x.size();
  if (f.size() != k_x) throw DomainMismatch("map is not total on X");
  if (product.size() != k_x * k_y)
    throw DomainMismatch("product space size is not |X| * |Y|");
  std::vector<double> w(product.size(), 0.0);
  for (std::size_t i = 0; i < k_x; ++i) {
    if (f[i] >= k_y) throw DomainMismatch("map value outside Y");
    w[i * k_y + f[i]] += mu_x.weights[i];
  }
  return DiscreteMeasure{&product, std::move(w)};
}

}  // namespace fmb
