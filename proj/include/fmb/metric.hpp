#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fmb/rng.hpp"

namespace fmb {

// Default cap on point counts; bounds the k x k distance matrix.
inline constexpr std::size_t kDefaultPointCap = 20000;

// Absolute tolerance for metric-axiom checks, applied after normalizing
// by the diameter. Absorbs roundoff in Euclidean inputs.
inline constexpr double kMetricTolerance = 1e-12;

// A finite metric space: k points with a validated symmetric distance
// matrix. Optionally carries Euclidean coordinates (one row per point)
// when the space lives in some R^d. Immutable after construction.
class FiniteMetricSpace {
public:
  std::size_t size() const { return k_; }
  double diameter() const { return diameter_; }

  double dist(std::size_t i, std::size_t j) const { return dist_[i * k_ + j]; }
  const std::vector<double>& dist_matrix() const { return dist_; }

  bool has_coords() const { return coord_dim_ > 0; }
  std::size_t coord_dim() const { return coord_dim_; }
  // Row i of the coordinate matrix; valid only when has_coords().
  const double* coords(std::size_t i) const { return coords_.data() + i * coord_dim_; }
  const std::vector<double>& coords_matrix() const { return coords_; }

private:
  friend FiniteMetricSpace build_space(std::vector<double> dist_matrix,
                                       std::size_t k,
                                       std::optional<std::vector<std::vector<double>>> coords,
                                       std::size_t cap);
  friend FiniteMetricSpace product_space(const FiniteMetricSpace&,
                                         const FiniteMetricSpace&, std::size_t);
  FiniteMetricSpace() = default;

  std::size_t k_ = 0;
  std::vector<double> dist_;    // row-major k x k
  std::size_t coord_dim_ = 0;   // 0 when no coordinates
  std::vector<double> coords_;  // row-major k x coord_dim
  double diameter_ = 0.0;
};

// Validates the metric axioms and caches the diameter. The triangle
// inequality is checked exhaustively for k <= 64 and on 1e5 sampled
// triples beyond; tolerance is kMetricTolerance * diameter.
// Throws MetricViolation / CardinalityOverflow.
FiniteMetricSpace build_space(std::vector<double> dist_matrix, std::size_t k,
                              std::optional<std::vector<std::vector<double>>> coords = std::nullopt,
                              std::size_t cap = kDefaultPointCap);

// Space from Euclidean coordinates; distances computed from the rows.
FiniteMetricSpace build_space_euclidean(const std::vector<std::vector<double>>& coords,
                                        std::size_t cap = kDefaultPointCap);

// Product space under d((x1,y1),(x2,y2)) = d_X(x1,x2) + d_Y(y1,y2).
// Point (i, j) gets index i * k_Y + j. Coordinates are dropped: the
// product metric is not the Euclidean metric of concatenated rows.
FiniteMetricSpace product_space(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                                std::size_t cap = kDefaultPointCap);

// The machine grid R^d_{p,M}: tuples (a_1/2^{j_1}, ..., a_d/2^{j_d}) with
// a in {-M..M}, j in {0..p}. Stored as the set of distinct real tuples;
// the per-axis values are shared across coordinates.
struct DyadicGrid {
  int d = 1;
  int p = 0;
  std::int64_t M = 1;
  std::vector<double> axis;      // distinct per-axis values, ascending
  std::vector<double> points;    // row-major size() x d
  std::size_t size() const { return d == 0 ? 0 : points.size() / d; }
  const double* point(std::size_t i) const { return points.data() + i * d; }
  double diameter() const;
  // Minimal positive gap between per-axis values.
  double axis_separation() const;
  // Distinct-point count per axis.
  std::size_t axis_size() const { return axis.size(); }
  // Count of (mantissa, exponent) representation pairs, (2^{p+1} M)^d, as
  // a natural log so astronomically fine grids stay representable. Larger
  // than size(): distinct reals collapse several representations.
  double log_representation_count() const;
};

// Enumerates the grid. Throws CardinalityOverflow when the number of
// distinct points exceeds cap.
DyadicGrid dyadic_grid(int d, int p, std::int64_t M, std::size_t cap = kDefaultPointCap);

// Nearest grid point in Euclidean distance. Ties break per coordinate
// toward the smaller axis value, so rounding is reproducible. Returns the
// index of the grid point; the grid's Cartesian structure makes the
// argmin separable by coordinate.
std::size_t round_to_grid(const std::vector<double>& y, const DyadicGrid& grid);
// Per-axis version used by the separable rounding.
double round_to_axis(double y, const std::vector<double>& axis);

// sep(A): min pairwise distance over the subset when |A| >= 2, 1 for a
// singleton and +infinity for the empty set.
double separation(const FiniteMetricSpace& space, const std::vector<std::size_t>& subset);

// A delta-separated subset of [0,1]^d with a statistical maximality audit.
struct PackingSet {
  int d = 1;
  double delta = 0.0;
  std::vector<double> points;  // row-major size() x d
  bool maximal = false;        // audit outcome, not a proof
  std::size_t size() const { return d == 0 ? 0 : points.size() / d; }
  const double* point(std::size_t i) const { return points.data() + i * d; }
};

// Greedy packing of [0,1]^d at separation delta. Candidates are sampled
// uniformly; a point is kept when it is >= delta from everything kept so
// far. The set is declared maximal once `audit_budget` consecutive
// candidates have all landed within delta of the set. Throws
// BudgetExhausted when the audit cannot complete within 64x the budget,
// and CardinalityOverflow past the packing-number cap 3^d (sqrt(d)/delta)^d.
PackingSet greedy_packing(int d, double delta, Rng& rng, std::size_t audit_budget = 100000);

// Restriction of a space to a subset of its points (order preserved).
FiniteMetricSpace restrict_space(const FiniteMetricSpace& space,
                                 const std::vector<std::size_t>& subset);

// The grid as a FiniteMetricSpace with Euclidean coordinates.
FiniteMetricSpace grid_space(const DyadicGrid& grid, std::size_t cap = kDefaultPointCap);

}  // namespace fmb
