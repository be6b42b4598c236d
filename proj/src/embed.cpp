#include "fmb/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fmb/errors.hpp"
#include "fmb/kernels.hpp"
#include "fmb/parallel.hpp"

namespace fmb {

std::string to_string(EmbeddingRecipe::Kind kind) {
  switch (kind) {
    case EmbeddingRecipe::Kind::bourgain: return "bourgain";
    case EmbeddingRecipe::Kind::jl_reduce: return "jl_reduce";
    case EmbeddingRecipe::Kind::identity: return "identity";
    case EmbeddingRecipe::Kind::line_heuristic: return "line_heuristic";
    case EmbeddingRecipe::Kind::compose: return "compose";
  }
  return "?";
}

DistortionStats measure_distortion(const std::vector<double>& images, std::size_t m,
                                   const FiniteMetricSpace& space) {
  const std::size_t k = space.size();
  if (k < 2) throw Error("distortion needs at least two points");
  if (images.size() != k * m) throw ShapeMismatch("image matrix is not k x m");

  const auto& K = kernels::ops();
  std::vector<double> lo(k, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k, 0.0);
  std::vector<char> degenerate(k, 0);
  parallel_for(k, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double img = std::sqrt(K.sq_dist(images.data() + i * m, images.data() + j * m, m));
      if (img == 0.0) {
        degenerate[i] = 1;
        return;
      }
      const double ratio = img / space.dist(i, j);
      lo[i] = std::min(lo[i], ratio);
      hi[i] = std::max(hi[i], ratio);
    }
  });
  for (std::size_t i = 0; i < k; ++i)
    if (degenerate[i]) {
      // Rescan serially so the reported pair is the lowest one.
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          if (K.sq_dist(images.data() + a * m, images.data() + b * m, m) == 0.0)
            throw NotInjective(static_cast<int>(a), static_cast<int>(b));
    }

  DistortionStats s;
  s.lip_lower = *std::min_element(lo.begin(), lo.end());
  s.lip_upper = *std::max_element(hi.begin(), hi.end());
  s.tau = s.lip_upper / s.lip_lower;
  return s;
}

namespace {

Embedding finish(const FiniteMetricSpace& space, std::size_t m, std::vector<double> images,
                 EmbeddingRecipe recipe) {
  Embedding e;
  e.source = &space;
  e.m = m;
  e.images = std::move(images);
  const DistortionStats s = measure_distortion(e.images, m, space);
  e.lip_lower = s.lip_lower;
  e.lip_upper = s.lip_upper;
  e.tau = s.tau;
  e.recipe = recipe;
  return e;
}

constexpr int kEmptyBlockRetries = 16;
constexpr int kInjectivityRetries = 16;

std::vector<double> bourgain_images(const FiniteMetricSpace& space, Rng rng, std::size_t levels,
                                    std::size_t reps) {
  const std::size_t k = space.size();
  const std::size_t q = levels * reps;
  std::vector<double> images(k * q);
  std::vector<std::size_t> subset;
  for (std::size_t i = 1; i <= levels; ++i) {
    const double keep = std::ldexp(1.0, -static_cast<int>(i));
    for (std::size_t j = 0; j < reps; ++j) {
      Rng block = rng.split(i * reps + j);
      subset.clear();
      for (int retry = 0; retry <= kEmptyBlockRetries && subset.empty(); ++retry) {
        Rng draw = block.split(retry);
        for (std::size_t x = 0; x < k; ++x)
          if (draw.bernoulli(keep)) subset.push_back(x);
      }
      if (subset.empty())
        throw DegenerateSample("subset at density level " + std::to_string(i) +
                               " stayed empty after " + std::to_string(kEmptyBlockRetries) +
                               " resamples");
      const std::size_t col = (i - 1) * reps + j;
      for (std::size_t x = 0; x < k; ++x) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t s : subset) d = std::min(d, space.dist(x, s));
        images[x * q + col] = d;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(q);
  for (double& v : images) v *= scale;
  return images;
}

}  // namespace

Embedding bourgain_embed(const FiniteMetricSpace& space, Rng& rng) {
  const std::size_t k = space.size();
  if (k < 2) throw Error("embedding needs at least two points");
  const std::size_t levels = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(k)))) + 1;
  const std::size_t reps =
      static_cast<std::size_t>(std::ceil(24.0 * std::log(static_cast<double>(k))));
  const std::size_t q = levels * std::max<std::size_t>(reps, 1);

  for (int attempt = 0;; ++attempt) {
    try {
      std::vector<double> images =
          bourgain_images(space, rng.split(0x626F7572ULL + attempt), levels, std::max<std::size_t>(reps, 1));
      EmbeddingRecipe recipe;
      recipe.kind = EmbeddingRecipe::Kind::bourgain;
      recipe.target_m = static_cast<int>(q);
      recipe.attempts = attempt + 1;
      return finish(space, q, std::move(images), recipe);
    } catch (const NotInjective&) {
      if (attempt >= kInjectivityRetries) throw;
    }
  }
}

Embedding jl_reduce(const Embedding& inner, int m, Rng& rng, int max_attempts) {
  const std::size_t k = inner.k();
  const double lnk = std::log(static_cast<double>(k));
  if (m < 3 || static_cast<double>(m) <= 8.0 * lnk) throw DimensionTooSmall(m, 8.0 * lnk);
  const double eps = 2.0 * std::sqrt(2.0) * std::sqrt(lnk) / std::sqrt(static_cast<double>(m));
  const double lo_target = std::sqrt(1.0 - eps);
  const double hi_target = std::sqrt(1.0 + eps);
  const std::size_t d_in = inner.m;

  const auto& K = kernels::ops();
  std::vector<double> best_images;
  double best_violation = std::numeric_limits<double>::infinity();
  int used_attempts = 0;
  bool met = false;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    used_attempts = attempt + 1;
    Rng draw = rng.split(0x6A6CULL + attempt);
    std::vector<double> matrix(static_cast<std::size_t>(m) * d_in);
    const double sd = 1.0 / std::sqrt(static_cast<double>(m));
    for (double& g : matrix) g = draw.normal() * sd;

    std::vector<double> proj(k * m);
    parallel_for(k, [&](std::size_t x) {
      K.matvec(matrix.data(), m, d_in, inner.image(x), proj.data() + x * m);
    });

    // Worst multiplicative violation of the JL window over all pairs.
    double violation = 1.0;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const double base = std::sqrt(K.sq_dist(inner.image(i), inner.image(j), d_in));
        const double now = std::sqrt(K.sq_dist(proj.data() + i * m, proj.data() + j * m,
                                               static_cast<std::size_t>(m)));
        if (base == 0.0 || now == 0.0) {
          ok = false;
          violation = std::numeric_limits<double>::infinity();
          break;
        }
        const double r = now / base;
        violation = std::max({violation, r / hi_target, lo_target / r});
      }
    if (ok && violation <= 1.0) {
      best_images = std::move(proj);
      met = true;
      break;
    }
    if (violation < best_violation) {
      best_violation = violation;
      best_images = std::move(proj);
    }
  }

  EmbeddingRecipe recipe;
  recipe.kind = EmbeddingRecipe::Kind::jl_reduce;
  recipe.target_m = m;
  recipe.attempts = used_attempts;
  recipe.guarantee_met = met;
  return finish(*inner.source, static_cast<std::size_t>(m), std::move(best_images), recipe);
}

Embedding identity_embed(const FiniteMetricSpace& space, int m) {
  if (!space.has_coords()) throw NoCoordinates();
  const std::size_t d = space.coord_dim();
  if (static_cast<std::size_t>(m) < d)
    throw DomainError("identity embedding needs m >= coordinate dimension");
  const std::size_t k = space.size();
  std::vector<double> images(k * m, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    std::copy(space.coords(i), space.coords(i) + d, images.begin() + i * m);
  EmbeddingRecipe recipe;
  recipe.kind = EmbeddingRecipe::Kind::identity;
  recipe.target_m = m;
  return finish(space, static_cast<std::size_t>(m), std::move(images), recipe);
}

Embedding line_embed_heuristic(const FiniteMetricSpace& space) {
  const std::size_t k = space.size();
  if (k < 2) throw Error("embedding needs at least two points");

  // Torgerson double centering: B = -1/2 J D^2 J.
  std::vector<double> b(k * k);
  std::vector<double> row_mean(k, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double sq = space.dist(i, j) * space.dist(i, j);
      b[i * k + j] = sq;
      row_mean[i] += sq;
    }
    row_mean[i] /= static_cast<double>(k);
    grand += row_mean[i];
  }
  grand /= static_cast<double>(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      b[i * k + j] = -0.5 * (b[i * k + j] - row_mean[i] - row_mean[j] + grand);

  // Top eigenpair by power iteration; fixed start keeps runs reproducible.
  std::vector<double> v(k), w(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = 1.0 + static_cast<double>(i) / static_cast<double>(k);
  double lambda = 0.0;
  const auto& K = kernels::ops();
  for (int it = 0; it < 1000; ++it) {
    K.matvec(b.data(), k, k, v.data(), w.data());
    const double norm = std::sqrt(K.dot(w.data(), w.data(), k));
    if (norm == 0.0) break;
    for (std::size_t i = 0; i < k; ++i) w[i] /= norm;
    K.matvec(b.data(), k, k, w.data(), v.data());
    const double next = K.dot(w.data(), v.data(), k);
    v.swap(w);
    if (std::fabs(next - lambda) <= 1e-15 * std::max(1.0, std::fabs(next)) && it > 2) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  const double scale = std::sqrt(std::max(lambda, 0.0));
  std::vector<double> images(k);
  for (std::size_t i = 0; i < k; ++i) images[i] = scale * v[i];

  // Minimal perturbation of exact collisions to restore injectivity.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b2) { return images[a] < images[b2]; });
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t t = 1; t < k; ++t) {
    const double gap = images[order[t]] - images[order[t - 1]];
    if (gap > 0.0) min_gap = std::min(min_gap, gap);
  }
  const double nudge = std::isfinite(min_gap) ? min_gap * 1e-6 : space.diameter() * 1e-9;
  for (std::size_t t = 1; t < k; ++t)
    if (images[order[t]] <= images[order[t - 1]])
      images[order[t]] = images[order[t - 1]] + nudge;

  EmbeddingRecipe recipe;
  recipe.kind = EmbeddingRecipe::Kind::line_heuristic;
  recipe.target_m = 1;
  return finish(space, 1, std::move(images), recipe);
}

Embedding compose(const Embedding& inner,
                  const std::function<std::vector<double>(std::span<const double>)>& outer,
                  std::size_t out_dim) {
  const std::size_t k = inner.k();
  std::vector<double> images(k * out_dim);
  for (std::size_t i = 0; i < k; ++i) {
    const std::vector<double> y = outer(std::span<const double>(inner.image(i), inner.m));
    if (y.size() != out_dim) throw ShapeMismatch("outer map output dimension mismatch");
    std::copy(y.begin(), y.end(), images.begin() + i * out_dim);
  }
  EmbeddingRecipe recipe;
  recipe.kind = EmbeddingRecipe::Kind::compose;
  recipe.target_m = static_cast<int>(out_dim);
  return finish(*inner.source, out_dim, std::move(images), recipe);
}

}  // namespace fmb
