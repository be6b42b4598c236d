#include "fmb/metric.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "fmb/errors.hpp"
#include "fmb/kernels.hpp"
#include "fmb/parallel.hpp"

namespace fmb {

namespace {

void validate_metric(const std::vector<double>& d, std::size_t k) {
  double diam = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (d[i * k + i] != 0.0)
      throw MetricViolation("identity", static_cast<int>(i), static_cast<int>(i), -1,
                            "nonzero diagonal entry");
    for (std::size_t j = 0; j < k; ++j) {
      const double v = d[i * k + j];
      if (!std::isfinite(v) || v < 0.0)
        throw MetricViolation("positivity", static_cast<int>(i), static_cast<int>(j), -1,
                              "entry not a finite non-negative real");
      diam = std::max(diam, v);
    }
  }
  const double tol = kMetricTolerance * std::max(1.0, diam);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::fabs(d[i * k + j] - d[j * k + i]) > tol)
        throw MetricViolation("symmetry", static_cast<int>(i), static_cast<int>(j), -1,
                              "asymmetric entry");
      if (d[i * k + j] <= 0.0)
        throw MetricViolation("positivity", static_cast<int>(i), static_cast<int>(j), -1,
                              "distinct points at zero distance");
    }

  auto check_triple = [&](std::size_t i, std::size_t j, std::size_t l) {
    if (d[i * k + l] > d[i * k + j] + d[j * k + l] + tol)
      throw MetricViolation("triangle", static_cast<int>(i), static_cast<int>(j),
                            static_cast<int>(l), "d(i,l) > d(i,j) + d(j,l)");
  };
  if (k <= 64) {
    // Exhaustive over all triples; parallel over the leading index.
    parallel_for(k, [&](std::size_t i) {
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) check_triple(i, j, l);
    });
  } else {
    Rng rng(0x747269706C65ULL);  // fixed audit seed
    for (int t = 0; t < 100000; ++t) {
      const std::size_t i = rng.uniform_int(k);
      const std::size_t j = rng.uniform_int(k);
      const std::size_t l = rng.uniform_int(k);
      check_triple(i, j, l);
    }
  }
}

double max_entry(const std::vector<double>& d) {
  double m = 0.0;
  for (double v : d) m = std::max(m, v);
  return m;
}

}  // namespace

FiniteMetricSpace build_space(std::vector<double> dist_matrix, std::size_t k,
                              std::optional<std::vector<std::vector<double>>> coords,
                              std::size_t cap) {
  if (k == 0) throw Error("space must contain at least one point");
  if (k > cap) throw CardinalityOverflow(k, cap);
  if (dist_matrix.size() != k * k) throw Error("distance matrix is not k x k");
  validate_metric(dist_matrix, k);
  // Mirror the upper triangle so the stored matrix is exactly symmetric
  // (inputs may carry roundoff up to the validated tolerance).
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) dist_matrix[j * k + i] = dist_matrix[i * k + j];

  FiniteMetricSpace s;
  s.k_ = k;
  s.diameter_ = max_entry(dist_matrix);
  s.dist_ = std::move(dist_matrix);
  if (coords) {
    if (coords->size() != k) throw Error("coordinate list size differs from k");
    s.coord_dim_ = coords->front().size();
    if (s.coord_dim_ == 0) throw Error("coordinates must have dimension >= 1");
    s.coords_.reserve(k * s.coord_dim_);
    for (const auto& row : *coords) {
      if (row.size() != s.coord_dim_) throw Error("ragged coordinate rows");
      s.coords_.insert(s.coords_.end(), row.begin(), row.end());
    }
  }
  return s;
}

FiniteMetricSpace build_space_euclidean(const std::vector<std::vector<double>>& coords,
                                        std::size_t cap) {
  const std::size_t k = coords.size();
  if (k == 0) throw Error("space must contain at least one point");
  const std::size_t d = coords.front().size();
  std::vector<double> flat(k * d);
  for (std::size_t i = 0; i < k; ++i) {
    if (coords[i].size() != d) throw Error("ragged coordinate rows");
    std::copy(coords[i].begin(), coords[i].end(), flat.begin() + i * d);
  }
  std::vector<double> dist(k * k, 0.0);
  const auto& K = kernels::ops();
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double v = std::sqrt(K.sq_dist(flat.data() + i * d, flat.data() + j * d, d));
      dist[i * k + j] = v;
      dist[j * k + i] = v;
    }
  return build_space(std::move(dist), k, coords, cap);
}

FiniteMetricSpace product_space(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                std::size_t cap) {
  const std::size_t kx = x.size(), ky = y.size();
  if (kx > cap / std::max<std::size_t>(ky, 1)) throw CardinalityOverflow(kx * ky, cap);
  const std::size_t k = kx * ky;
  FiniteMetricSpace s;
  s.k_ = k;
  s.dist_.assign(k * k, 0.0);
  for (std::size_t i1 = 0; i1 < kx; ++i1)
    for (std::size_t j1 = 0; j1 < ky; ++j1)
      for (std::size_t i2 = 0; i2 < kx; ++i2)
        for (std::size_t j2 = 0; j2 < ky; ++j2)
          s.dist_[(i1 * ky + j1) * k + (i2 * ky + j2)] = x.dist(i1, i2) + y.dist(j1, j2);
  s.diameter_ = max_entry(s.dist_);
  return s;
}

double DyadicGrid::diameter() const {
  // Max distance is attained at opposite corners (+/- M in every axis).
  const double lo = axis.front(), hi = axis.back();
  return std::sqrt(static_cast<double>(d)) * (hi - lo);
}

double DyadicGrid::axis_separation() const {
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < axis.size(); ++i) sep = std::min(sep, axis[i] - axis[i - 1]);
  return sep;
}

double DyadicGrid::log_representation_count() const {
  return d * ((p + 1) * std::log(2.0) + std::log(static_cast<double>(M)));
}

DyadicGrid dyadic_grid(int d, int p, std::int64_t M, std::size_t cap) {
  if (d < 1 || p < 0 || M < 1) throw Error("dyadic grid needs d >= 1, p >= 0, M >= 1");
  std::set<double> vals;
  for (int j = 0; j <= p; ++j) {
    const double denom = std::ldexp(1.0, j);  // 2^j, exact
    for (std::int64_t a = -M; a <= M; ++a) vals.insert(static_cast<double>(a) / denom);
  }
  DyadicGrid g;
  g.d = d;
  g.p = p;
  g.M = M;
  g.axis.assign(vals.begin(), vals.end());

  const std::size_t per_axis = g.axis.size();
  double total = 1.0;
  for (int i = 0; i < d; ++i) {
    total *= static_cast<double>(per_axis);
    if (total > static_cast<double>(cap))
      throw CardinalityOverflow(static_cast<std::size_t>(total), cap);
  }
  const std::size_t n = static_cast<std::size_t>(total);
  g.points.resize(n * d);
  // d-fold Cartesian power in odometer order (last axis fastest).
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (int c = 0; c < d; ++c) g.points[r * d + c] = g.axis[idx[c]];
    for (int c = d - 1; c >= 0; --c) {
      if (++idx[c] < per_axis) break;
      idx[c] = 0;
    }
  }
  return g;
}

double round_to_axis(double y, const std::vector<double>& axis) {
  auto it = std::lower_bound(axis.begin(), axis.end(), y);
  if (it == axis.begin()) return axis.front();
  if (it == axis.end()) return axis.back();
  const double hi = *it, lo = *(it - 1);
  // Tie goes to the smaller value.
  return (y - lo <= hi - y) ? lo : hi;
}

std::size_t round_to_grid(const std::vector<double>& y, const DyadicGrid& grid) {
  if (grid.size() == 0) throw Error("empty grid");
  if (static_cast<int>(y.size()) != grid.d) throw ShapeMismatch("point dimension differs from grid");
  // The grid is a Cartesian power, so the Euclidean argmin separates per
  // coordinate; the per-axis tie-break respects the global policy.
  const std::size_t per_axis = grid.axis.size();
  std::size_t index = 0;
  for (int c = 0; c < grid.d; ++c) {
    const double v = round_to_axis(y[c], grid.axis);
    const std::size_t pos =
        std::lower_bound(grid.axis.begin(), grid.axis.end(), v) - grid.axis.begin();
    index = index * per_axis + pos;
  }
  return index;
}

double separation(const FiniteMetricSpace& space, const std::vector<std::size_t>& subset) {
  if (subset.empty()) return std::numeric_limits<double>::infinity();
  if (subset.size() == 1) return 1.0;
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b)
      sep = std::min(sep, space.dist(subset[a], subset[b]));
  return sep;
}

PackingSet greedy_packing(int d, double delta, Rng& rng, std::size_t audit_budget) {
  if (d < 1) throw Error("packing needs d >= 1");
  if (!(delta > 0.0)) throw Error("packing separation must be positive");
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  // delta beyond the cube diameter still packs: a single point.
  const double cap = std::max(1.0, std::pow(3.0, d) * std::pow(sqrt_d / delta, d));

  PackingSet out;
  out.d = d;
  out.delta = delta;
  const double delta_sq = delta * delta;
  std::vector<double> cand(d);
  std::size_t consecutive_rejects = 0;
  std::size_t draws = 0;
  const std::size_t max_draws = audit_budget * 64;
  const auto& K = kernels::ops();
  while (consecutive_rejects < audit_budget) {
    if (++draws > max_draws)
      throw BudgetExhausted("packing maximality audit did not converge within " +
                            std::to_string(max_draws) + " candidate draws");
    for (int c = 0; c < d; ++c) cand[c] = rng.next_double();
    bool separated = true;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (K.sq_dist(out.point(i), cand.data(), d) < delta_sq) {
        separated = false;
        break;
      }
    }
    if (separated) {
      out.points.insert(out.points.end(), cand.begin(), cand.end());
      if (static_cast<double>(out.size()) > cap)
        throw CardinalityOverflow(out.size(), static_cast<std::size_t>(cap));
      consecutive_rejects = 0;
    } else {
      ++consecutive_rejects;
    }
  }
  out.maximal = true;
  return out;
}

FiniteMetricSpace restrict_space(const FiniteMetricSpace& space,
                                 const std::vector<std::size_t>& subset) {
  const std::size_t k = subset.size();
  std::vector<double> dist(k * k, 0.0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) dist[a * k + b] = space.dist(subset[a], subset[b]);
  std::optional<std::vector<std::vector<double>>> coords;
  if (space.has_coords()) {
    coords.emplace();
    for (std::size_t a : subset)
      coords->emplace_back(space.coords(a), space.coords(a) + space.coord_dim());
  }
  return build_space(std::move(dist), k, std::move(coords));
}

FiniteMetricSpace grid_space(const DyadicGrid& grid, std::size_t cap) {
  std::vector<std::vector<double>> coords;
  coords.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    coords.emplace_back(grid.point(i), grid.point(i) + grid.d);
  return build_space_euclidean(coords, cap);
}

}  // namespace fmb
