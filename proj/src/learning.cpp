#include "fmb/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fmb/errors.hpp"
#include "fmb/kernels.hpp"

namespace fmb {

double lipschitz_upper(const std::vector<std::size_t>& table, const FiniteMetricSpace& x,
                       const FiniteMetricSpace& y) {
  const std::size_t k = x.size();
  if (table.size() != k) throw DomainMismatch("hypothesis table is not total on X");
  for (std::size_t value : table)
    if (value >= y.size()) throw DomainMismatch("hypothesis value outside Y");
  double lip = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      lip = std::max(lip, y.dist(table[i], table[j]) / x.dist(i, j));
  return lip;
}

Hypothesis make_hypothesis(std::vector<std::size_t> table, const FiniteMetricSpace& x,
                           const FiniteMetricSpace& y) {
  Hypothesis h;
  h.lip_upper = lipschitz_upper(table, x, y);
  h.table = std::move(table);
  return h;
}

Hypothesis discretize_function(const std::function<double(const double*)>& f,
                               const DyadicGrid& grid_in, const DyadicGrid& grid_out) {
  if (grid_out.d != 1) throw ShapeMismatch("output grid must be one-dimensional");
  const double hull = static_cast<double>(grid_out.M);
  Hypothesis h;
  h.table.resize(grid_in.size());
  for (std::size_t i = 0; i < grid_in.size(); ++i) {
    const double v = f(grid_in.point(i));
    if (std::fabs(v) > hull) throw RangeEscape(v, hull);
    const double rounded = round_to_axis(v, grid_out.axis);
    h.table[i] = std::lower_bound(grid_out.axis.begin(), grid_out.axis.end(), rounded) -
                 grid_out.axis.begin();
  }
  // Exact constant of the discretized map, measured over all pairs.
  const std::size_t k = grid_in.size();
  double lip = 0.0;
  const auto& K = kernels::ops();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double dx =
          std::sqrt(K.sq_dist(grid_in.point(i), grid_in.point(j), grid_in.d));
      const double dy = std::fabs(grid_out.axis[h.table[i]] - grid_out.axis[h.table[j]]);
      lip = std::max(lip, dy / dx);
    }
  h.lip_upper = lip;
  return h;
}

void validate_mlp(const ReLUMLP& mlp) {
  if (mlp.layers.size() != static_cast<std::size_t>(mlp.depth) + 1)
    throw ShapeMismatch("layer count must be depth + 1");
  std::size_t in = mlp.input_dim();
  for (const auto& layer : mlp.layers) {
    if (layer.weights.empty()) throw ShapeMismatch("empty layer");
    const std::size_t rows = layer.weights.size();
    if (rows > static_cast<std::size_t>(mlp.width) && rows != 1)
      throw ShapeMismatch("layer wider than W");
    if (layer.bias.size() != rows) throw ShapeMismatch("bias length mismatch");
    for (const auto& row : layer.weights) {
      if (row.size() != in) throw ShapeMismatch("weight row length mismatch");
      for (double w : row)
        if (std::fabs(w) > mlp.weight_bound)
          throw ShapeMismatch("weight entry exceeds bound B");
    }
    for (double b : layer.bias)
      if (std::fabs(b) > mlp.weight_bound) throw ShapeMismatch("bias entry exceeds bound B");
    in = rows;
  }
  if (mlp.layers.back().weights.size() != 1) throw ShapeMismatch("output dimension must be 1");
}

double relu_mlp_eval(const ReLUMLP& mlp, const std::vector<double>& x) {
  if (x.size() != mlp.input_dim()) throw ShapeMismatch("input dimension mismatch");
  std::vector<double> cur = x, next;
  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    const auto& layer = mlp.layers[l];
    next.assign(layer.weights.size(), 0.0);
    for (std::size_t r = 0; r < layer.weights.size(); ++r) {
      next[r] = kernels::ops().dot(layer.weights[r].data(), cur.data(), cur.size()) +
                layer.bias[r];
      if (l + 1 < mlp.layers.size()) next[r] = std::max(0.0, next[r]);
    }
    cur.swap(next);
  }
  return cur.front();
}

double relu_mlp_lip_bound(const ReLUMLP& mlp) {
  return mlp.weight_bound * static_cast<double>(mlp.depth) *
         static_cast<double>(mlp.width) * static_cast<double>(mlp.width);
}

double riesz_network_lip_bound(double K, double lambda_star, double weight_bound) {
  return 72.0 * K * (std::ceil(lambda_star) + 2.0) * weight_bound;
}

double riesz_network_lip_bound_discretized(double K, double lambda_star, double weight_bound) {
  return riesz_network_lip_bound(K, lambda_star, weight_bound) + 1.0;
}

double riesz_network_depth(double K, double lambda_star, int width) {
  if (width < 6) throw ShapeMismatch("realization needs width >= 6");
  const double lanes = std::floor((width - 2.0) / 4.0);
  return 2.0 * (std::ceil(lambda_star) + 2.0) * std::floor(K / lanes);
}

ReLUMLP random_mlp(int input_dim, int width, int depth, double weight_bound, Rng& rng) {
  if (input_dim < 1 || width < 1 || depth < 1 || !(weight_bound > 0.0))
    throw ShapeMismatch("bad MLP architecture");
  ReLUMLP mlp;
  mlp.width = width;
  mlp.depth = depth;
  mlp.weight_bound = weight_bound;
  std::size_t in = static_cast<std::size_t>(input_dim);
  for (int l = 0; l <= depth; ++l) {
    const std::size_t rows = (l == depth) ? 1 : static_cast<std::size_t>(width);
    ReluLayer layer;
    layer.weights.assign(rows, std::vector<double>(in, 0.0));
    layer.bias.assign(rows, 0.0);
    for (auto& row : layer.weights)
      for (double& w : row) w = rng.uniform(-weight_bound, weight_bound);
    for (double& b : layer.bias) b = rng.uniform(-weight_bound, weight_bound);
    mlp.layers.push_back(std::move(layer));
    in = rows;
  }
  validate_mlp(mlp);
  return mlp;
}

double riesz_eval(RieszKind kind, int j, double t) {
  const double jt = static_cast<double>(j) * t;
  double s = jt - std::floor(jt);  // wrap to [0,1)
  if (kind == RieszKind::cosine) return (s < 0.5) ? 1.0 - 4.0 * s : 4.0 * s - 3.0;
  if (s < 0.25) return 4.0 * s;
  if (s < 0.75) return 2.0 - 4.0 * s;
  return 4.0 * s - 4.0;
}

int RieszTarget::lambda_star() const {
  return *std::max_element(dictionary.begin(), dictionary.end());
}

double riesz_target_eval(const RieszTarget& target, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != target.d) throw ShapeMismatch("input dimension mismatch");
  std::vector<double> rotated(target.d, 0.0);
  kernels::ops().matvec(target.rotation.data(), target.d, target.d, x.data(), rotated.data());
  double out = 0.0;
  for (int i = 0; i < target.d; ++i)
    for (std::size_t q = 0; q < target.dictionary.size(); ++q) {
      const int freq = target.dictionary[q];
      out += target.a[i][q] * riesz_eval(RieszKind::cosine, freq, rotated[i]) +
             target.b[i][q] * riesz_eval(RieszKind::sine, freq, rotated[i]);
    }
  return out;
}

RieszTarget random_riesz_target(int d, int K, int max_frequency, double coeff_bound, Rng& rng) {
  if (d < 1 || K < 1 || max_frequency < K) throw ShapeMismatch("bad target parameters");
  RieszTarget t;
  t.d = d;
  t.coeff_bound = coeff_bound;
  // K distinct frequencies from 1..max_frequency.
  std::vector<int> pool(max_frequency);
  for (int i = 0; i < max_frequency; ++i) pool[i] = i + 1;
  for (int i = 0; i < K; ++i) {
    const std::size_t pick = i + rng.uniform_int(pool.size() - i);
    std::swap(pool[i], pool[pick]);
    t.dictionary.push_back(pool[i]);
  }
  std::sort(t.dictionary.begin(), t.dictionary.end());
  t.a.assign(d, std::vector<double>(K, 0.0));
  t.b.assign(d, std::vector<double>(K, 0.0));
  for (int i = 0; i < d; ++i)
    for (int q = 0; q < K; ++q) {
      t.a[i][q] = rng.uniform(-coeff_bound, coeff_bound);
      t.b[i][q] = rng.uniform(-coeff_bound, coeff_bound);
    }

  // Orthogonal U by Gram-Schmidt on a Gaussian matrix.
  std::vector<std::vector<double>> g(d, std::vector<double>(d));
  for (auto& row : g)
    for (double& v : row) v = rng.normal();
  for (int c = 0; c < d; ++c) {
    for (int prev = 0; prev < c; ++prev) {
      double proj = 0.0;
      for (int r = 0; r < d; ++r) proj += g[r][c] * g[r][prev];
      for (int r = 0; r < d; ++r) g[r][c] -= proj * g[r][prev];
    }
    double norm = 0.0;
    for (int r = 0; r < d; ++r) norm += g[r][c] * g[r][c];
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw DegenerateSample("Gaussian matrix nearly singular");
    for (int r = 0; r < d; ++r) g[r][c] /= norm;
  }
  t.rotation.resize(static_cast<std::size_t>(d) * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) t.rotation[r * d + c] = g[r][c];
  // U^T U = I within 1e-10.
  for (int c1 = 0; c1 < d; ++c1)
    for (int c2 = 0; c2 < d; ++c2) {
      double dotv = 0.0;
      for (int r = 0; r < d; ++r) dotv += g[r][c1] * g[r][c2];
      if (std::fabs(dotv - (c1 == c2 ? 1.0 : 0.0)) > 1e-10)
        throw DegenerateSample("orthogonalization drifted beyond tolerance");
    }
  return t;
}

LossFn absolute_loss(const FiniteMetricSpace& y) {
  LossFn loss;
  loss.y = &y;
  loss.table = y.dist_matrix();
  // Exact constant over the product metric on Y x Y.
  const std::size_t k = y.size();
  double lip = 0.0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c)
        for (std::size_t e = 0; e < k; ++e) {
          if (a == c && b == e) continue;
          const double denom = y.dist(a, c) + y.dist(b, e);
          lip = std::max(lip, std::fabs(loss(a, b) - loss(c, e)) / denom);
        }
  loss.lip_upper = lip;
  return loss;
}

LossFn zero_one_loss(const FiniteMetricSpace& y) {
  LossFn loss;
  loss.y = &y;
  const std::size_t k = y.size();
  loss.table.assign(k * k, 1.0);
  for (std::size_t a = 0; a < k; ++a) loss.table[a * k + a] = 0.0;
  double min_dist = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) min_dist = std::min(min_dist, y.dist(a, b));
  loss.lip_upper = (k >= 2) ? 1.0 / min_dist : 0.0;
  return loss;
}

double sup_gap_bruteforce(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                          double lip_budget, const DiscreteMeasure& p_xy,
                          const SampleBatch& batch, const LossFn& loss) {
  const std::size_t kx = x.size(), ky = y.size();
  if (kx > 6 || ky > 4)
    throw ClassTooLarge("brute-force enumeration capped at |X| <= 6, |Y| <= 4");
  if (p_xy.size() != kx * ky) throw DomainMismatch("P is not a measure on X x Y");

  std::size_t total = 1;
  for (std::size_t i = 0; i < kx; ++i) total *= ky;

  // Empirical counts over the product points.
  std::vector<double> emp(kx * ky, 0.0);
  const double inc = 1.0 / static_cast<double>(batch.N());
  for (std::size_t idx : batch.indices) emp.at(idx) += inc;

  double sup_gap = 0.0;
  std::vector<std::size_t> table(kx, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < kx; ++i) {
      table[i] = c % ky;
      c /= ky;
    }
    if (lipschitz_upper(table, x, y) > lip_budget + 1e-12) continue;
    double risk = 0.0, emp_risk = 0.0;
    for (std::size_t i = 0; i < kx; ++i)
      for (std::size_t j = 0; j < ky; ++j) {
        const double l = loss(table[i], j);
        risk += p_xy.weights[i * ky + j] * l;
        emp_risk += emp[i * ky + j] * l;
      }
    sup_gap = std::max(sup_gap, std::fabs(risk - emp_risk));
  }
  return sup_gap;
}

}  // namespace fmb
