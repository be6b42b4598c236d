// Test-side oracles, kept independent of the library's solver paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "fmb/metric.hpp"
#include "fmb/transport.hpp"

namespace fmb::test {

// Exact 1-Wasserstein optimum by enumerating the spanning-tree vertices of
// the transportation polytope: every support of n+m-1 cells that connects
// all nodes determines the flows uniquely by leaf peeling, and the LP
// optimum is attained at one of the non-negative ones. Exponential; only
// for tiny instances.
inline double wasserstein_vertex_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const FiniteMetricSpace& space = *mu.space;
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu.weights[i] > 0.0) rows.push_back(i);
  for (std::size_t j = 0; j < nu.size(); ++j)
    if (nu.weights[j] > 0.0) cols.push_back(j);
  const std::size_t n = rows.size(), m = cols.size();
  const std::size_t cells = n * m;
  const std::size_t basis_size = n + m - 1;

  std::vector<std::size_t> pick(basis_size);
  std::iota(pick.begin(), pick.end(), 0);
  double best = std::numeric_limits<double>::infinity();

  auto evaluate = [&](const std::vector<std::size_t>& cells_pick) {
    // Union-find acyclicity + connectivity over n + m nodes.
    std::vector<std::size_t> parent(n + m);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (std::size_t cell : cells_pick) {
      const std::size_t a = find(cell / m), b = find(n + cell % m);
      if (a == b) return;  // cycle
      parent[a] = b;
    }
    // n+m-1 acyclic edges over n+m nodes are automatically spanning.

    // Leaf peeling determines the unique flow with this support.
    std::vector<double> rem(n + m);
    for (std::size_t a = 0; a < n; ++a) rem[a] = mu.weights[rows[a]];
    for (std::size_t b = 0; b < m; ++b) rem[n + b] = nu.weights[cols[b]];
    std::vector<int> degree(n + m, 0);
    std::vector<std::vector<std::size_t>> incident(n + m);
    for (std::size_t cell : cells_pick) {
      ++degree[cell / m];
      ++degree[n + cell % m];
      incident[cell / m].push_back(cell);
      incident[n + cell % m].push_back(cell);
    }
    std::vector<char> used(cells, 0);
    std::vector<double> flow(cells, 0.0);
    std::vector<std::size_t> queue;
    for (std::size_t v = 0; v < n + m; ++v)
      if (degree[v] == 1) queue.push_back(v);
    while (!queue.empty()) {
      const std::size_t v = queue.back();
      queue.pop_back();
      if (degree[v] != 1) continue;
      std::size_t edge = cells;
      for (std::size_t cell : incident[v])
        if (!used[cell]) {
          edge = cell;
          break;
        }
      if (edge == cells) continue;
      used[edge] = 1;
      const std::size_t a = edge / m, b = n + edge % m;
      const std::size_t other = (v == a) ? b : a;
      flow[edge] = rem[v];
      rem[other] -= rem[v];
      rem[v] = 0.0;
      --degree[v];
      if (--degree[other] == 1) queue.push_back(other);
    }
    double cost = 0.0;
    for (std::size_t cell : cells_pick) {
      if (flow[cell] < -1e-12) return;  // infeasible vertex
      cost += std::max(flow[cell], 0.0) * space.dist(rows[cell / m], cols[cell % m]);
    }
    best = std::min(best, cost);
  };

  // Enumerate all cell subsets of size n+m-1.
  for (;;) {
    evaluate(pick);
    std::size_t pos = basis_size;
    while (pos > 0 && pick[pos - 1] == cells - basis_size + pos - 1) --pos;
    if (pos == 0) break;
    ++pick[pos - 1];
    for (std::size_t q = pos; q < basis_size; ++q) pick[q] = pick[q - 1] + 1;
  }
  return best;
}

}  // namespace fmb::test
