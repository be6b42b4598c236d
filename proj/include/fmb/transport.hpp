#pragma once

#include <cstdint>
#include <vector>

#include "fmb/metric.hpp"
#include "fmb/rng.hpp"

namespace fmb {

// Probability weights over the points of a space.
struct DiscreteMeasure {
  const FiniteMetricSpace* space = nullptr;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
};

// Validates non-negativity and that the weights sum to 1 within 1e-12.
DiscreteMeasure make_measure(const FiniteMetricSpace& space, std::vector<double> weights);
DiscreteMeasure dirac(const FiniteMetricSpace& space, std::size_t point);
DiscreteMeasure uniform_measure(const FiniteMetricSpace& space);

// Transport plan between two measures on the same space.
struct Coupling {
  const DiscreteMeasure* row_marginal = nullptr;
  const DiscreteMeasure* col_marginal = nullptr;
  std::size_t k = 0;
  std::vector<double> matrix;  // row-major k x k
  double entry(std::size_t i, std::size_t j) const { return matrix[i * k + j]; }
  // sum_{x,y} d(x,y) gamma(x,y) against the given space.
  double objective(const FiniteMetricSpace& space) const;
};

struct WassersteinOptions {
  // Scale costs to integers by 2^32 / diameter and pivot exactly.
  bool integer_pivoting = false;
  // Dual-feasibility tolerance for double-cost pivoting.
  double tolerance = 1e-9;
};

struct WassersteinResult {
  double value = 0.0;
  Coupling coupling;
};

// Exact 1-Wasserstein distance by network simplex on the complete
// bipartite graph over the two supports. Zero-weight points are pruned
// before the solve and the coupling re-expanded afterwards.
// Throws MarginalMismatch when the measures live on different spaces.
WassersteinResult wasserstein_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const WassersteinOptions& options = {});

// Independent oracle for spaces with 1-D coordinates: the sorted-CDF area
// formula integral |F_mu - F_nu|. Used to cross-check wasserstein_exact.
double wasserstein_1d_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Total variation: max_B |mu(B) - nu(B)| = (1/2) sum_i |mu_i - nu_i|.
double tv_distance(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// N i.i.d. categorical draws from mu.
struct SampleBatch {
  std::vector<std::size_t> indices;
  std::uint64_t seed = 0;
  std::size_t N() const { return indices.size(); }
};

SampleBatch sample(const DiscreteMeasure& mu, std::size_t n, std::uint64_t seed);
DiscreteMeasure empirical(const FiniteMetricSpace& space, const SampleBatch& batch);

// Push mu_X through x -> (x, f(x)) onto the product space whose point
// (i, j) has index i * k_y + j. `f` maps X indices to Y indices.
DiscreteMeasure graph_pushforward(const DiscreteMeasure& mu_x,
                                  const std::vector<std::size_t>& f,
                                  const FiniteMetricSpace& product, std::size_t k_y);

}  // namespace fmb
