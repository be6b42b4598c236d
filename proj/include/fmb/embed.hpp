#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fmb/metric.hpp"
#include "fmb/rng.hpp"

namespace fmb {

// How an embedding was produced, for reports and serialized output.
struct EmbeddingRecipe {
  enum class Kind { bourgain, jl_reduce, identity, line_heuristic, compose };
  Kind kind = Kind::identity;
  std::uint64_t seed = 0;
  int target_m = 0;
  int attempts = 1;
  // jl_reduce only: whether the projection passed the pair-ratio check.
  bool guarantee_met = true;
};

std::string to_string(EmbeddingRecipe::Kind kind);

// A bi-Lipschitz map of a finite metric space into R^m, stored as the
// image matrix together with its exact Lipschitz constants: lip_lower and
// lip_upper are the min/max over all pairs of ||phi(x)-phi(x~)|| / d(x,x~),
// and tau = lip_upper / lip_lower >= 1.
struct Embedding {
  const FiniteMetricSpace* source = nullptr;
  std::size_t m = 0;
  std::vector<double> images;  // row-major k x m
  double lip_lower = 0.0;
  double lip_upper = 0.0;
  double tau = 1.0;
  EmbeddingRecipe recipe;

  std::size_t k() const { return source ? source->size() : 0; }
  const double* image(std::size_t i) const { return images.data() + i * m; }
};

struct DistortionStats {
  double lip_lower = 0.0;
  double lip_upper = 0.0;
  double tau = 1.0;
};

// Exact min/max distance ratio over all k(k-1)/2 pairs.
// Throws NotInjective when two image rows coincide.
DistortionStats measure_distortion(const std::vector<double>& images, std::size_t m,
                                   const FiniteMetricSpace& space);

// Frechet-style embedding from the proof of Bourgain's theorem:
// coordinates d(x, S_{i,j}) for random subsets S_{i,j} over
// floor(log2 k)+1 density levels and ceil(24 ln k) repetitions per level,
// each point kept with probability 2^{-i}, all coordinates rescaled by
// 1 / (number of coordinates). Empty subsets are resampled (16 tries)
// before DegenerateSample is raised; a non-injective draw retries the
// whole construction on a fresh stream.
Embedding bourgain_embed(const FiniteMetricSpace& space, Rng& rng);

// Dense Gaussian Johnson-Lindenstrauss reduction of an embedding to
// dimension m (requires m >= 3 and m > 8 ln k). Entries are N(0, 1/m).
// The matrix is redrawn until every pair ratio (projected vs. inner image)
// lies within [sqrt(1-eps), sqrt(1+eps)] for eps = 2√2·sqrt(ln k)/sqrt(m),
// up to `max_attempts` tries; otherwise the best attempt is returned with
// recipe.guarantee_met = false.
Embedding jl_reduce(const Embedding& inner, int m, Rng& rng, int max_attempts = 32);

// Coordinates zero-padded to R^m (requires coordinates and m >= d).
Embedding identity_embed(const FiniteMetricSpace& space, int m);

// Classical-scaling first principal coordinate, minimally perturbed to
// restore injectivity. Bound calculators use the worst-case 12k for m = 1
// regardless of the distortion measured here.
Embedding line_embed_heuristic(const FiniteMetricSpace& space);

// Pointwise composition with a map defined on the inner images; constants
// are measured afresh on the output.
Embedding compose(const Embedding& inner,
                  const std::function<std::vector<double>(std::span<const double>)>& outer,
                  std::size_t out_dim);

}  // namespace fmb
