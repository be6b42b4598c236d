#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fmb {

// Network simplex for the balanced transportation problem on the complete
// bipartite graph: n sources with supplies a_i > 0, m sinks with demands
// b_j > 0, sum a = sum b, arc (i, j) has index i*m + j and cost c[i*m+j].
//
// The basis starts from the north-west-corner spanning tree. Pivots use
// Bland's rule: the entering arc is the lowest-index arc with reduced cost
// below -tol, the leaving arc the lowest-index blocking arc, so runs are
// deterministic and cycling-free. Cost is a template parameter: plain
// doubles with a dual-feasibility tolerance, or pre-scaled integers with
// tol = 0 for exact pivoting.
template <typename Cost>
class TransportSimplex {
public:
  TransportSimplex(std::size_t n, std::size_t m, std::vector<Cost> cost,
                   std::vector<double> supply, std::vector<double> demand,
                   Cost tol)
      : n_(n), m_(m), cost_(std::move(cost)), tol_(tol) {
    if (cost_.size() != n_ * m_) throw std::invalid_argument("cost size");
    flow_.assign(n_ * m_, 0.0);
    in_basis_.assign(n_ * m_, false);
    northwest_corner(supply, demand);
  }

  // Runs pivots to optimality. Returns the number of pivots performed.
  std::size_t solve() {
    std::size_t pivots = 0;
    const std::size_t nodes = n_ + m_;
    u_.assign(n_, Cost{0});
    v_.assign(m_, Cost{0});
    parent_.assign(nodes, -1);
    parent_arc_.assign(nodes, -1);
    for (;;) {
      compute_potentials();
      const std::ptrdiff_t entering = find_entering();
      if (entering < 0) break;
      pivot(static_cast<std::size_t>(entering));
      ++pivots;
    }
    return pivots;
  }

  double flow(std::size_t i, std::size_t j) const { return flow_[i * m_ + j]; }
  const std::vector<double>& flows() const { return flow_; }

private:
  void northwest_corner(std::vector<double> a, std::vector<double> b) {
    std::size_t i = 0, j = 0;
    for (std::size_t step = 0; step + 1 < n_ + m_ || step == 0; ++step) {
      const double t = std::min(a[i], b[j]);
      flow_[i * m_ + j] = t;
      in_basis_[i * m_ + j] = true;
      a[i] -= t;
      b[j] -= t;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i == n_ - 1) ++j;
      else if (j == m_ - 1) ++i;
      else if (a[i] <= 0.0) ++i;
      else ++j;
    }
  }

  // Dual potentials from the basis tree; basic arcs have u_i + v_j = c.
  void compute_potentials() {
    const std::size_t nodes = n_ + m_;
    // Basis adjacency: node index i for sources, n_ + j for sinks.
    adj_head_.assign(nodes, -1);
    adj_next_.clear();
    adj_arc_.clear();
    auto add_edge = [&](std::size_t node, std::size_t arc) {
      adj_next_.push_back(adj_head_[node]);
      adj_arc_.push_back(arc);
      adj_head_[node] = static_cast<std::ptrdiff_t>(adj_arc_.size()) - 1;
    };
    for (std::size_t e = 0; e < n_ * m_; ++e)
      if (in_basis_[e]) {
        add_edge(e / m_, e);
        add_edge(n_ + e % m_, e);
      }

    std::fill(parent_.begin(), parent_.end(), -2);  // -2 = unvisited
    stack_.clear();
    stack_.push_back(0);
    parent_[0] = -1;
    u_[0] = Cost{0};
    while (!stack_.empty()) {
      const std::size_t node = stack_.back();
      stack_.pop_back();
      for (std::ptrdiff_t it = adj_head_[node]; it >= 0; it = adj_next_[it]) {
        const std::size_t arc = adj_arc_[it];
        const std::size_t src = arc / m_;
        const std::size_t snk = n_ + arc % m_;
        const std::size_t other = (node == src) ? snk : src;
        if (parent_[other] != -2) continue;
        parent_[other] = static_cast<std::ptrdiff_t>(node);
        parent_arc_[other] = static_cast<std::ptrdiff_t>(arc);
        if (other >= n_) v_[other - n_] = cost_[arc] - u_[src];
        else u_[other] = cost_[arc] - v_[snk - n_];
        stack_.push_back(other);
      }
    }
  }

  std::ptrdiff_t find_entering() const {
    for (std::size_t e = 0; e < n_ * m_; ++e) {
      if (in_basis_[e]) continue;
      const Cost rc = cost_[e] - u_[e / m_] - v_[e % m_];
      if (rc < -tol_) return static_cast<std::ptrdiff_t>(e);
    }
    return -1;
  }

  void pivot(std::size_t entering) {
    // Tree path from the entering arc's sink back to its source. Arcs at
    // even positions on that walk lose flow when the entering arc gains.
    const std::size_t src = entering / m_;
    const std::size_t snk = n_ + entering % m_;
    path_of(src, path_src_);
    path_of(snk, path_snk_);
    // Lowest common ancestor: first node of the sink path that also lies
    // on the source path.
    on_src_path_.assign(n_ + m_, 0);
    for (std::size_t v : path_src_) on_src_path_[v] = 1;
    std::size_t lca_pos_snk = 0;
    while (!on_src_path_[path_snk_[lca_pos_snk]]) ++lca_pos_snk;
    const std::size_t lca = path_snk_[lca_pos_snk];
    std::size_t lca_pos_src = 0;
    while (path_src_[lca_pos_src] != lca) ++lca_pos_src;

    // Arcs along snk -> lca -> src, in walk order.
    cycle_.clear();
    for (std::size_t t = 0; t < lca_pos_snk; ++t)
      cycle_.push_back(parent_arc_of(path_snk_[t]));
    for (std::size_t t = lca_pos_src; t >= 1; --t)
      cycle_.push_back(parent_arc_of(path_src_[t - 1]));

    double theta = std::numeric_limits<double>::infinity();
    std::ptrdiff_t leaving = -1;
    for (std::size_t pos = 0; pos < cycle_.size(); ++pos) {
      if (pos % 2 != 0) continue;  // these arcs gain flow
      const std::size_t arc = cycle_[pos];
      const double f = flow_[arc];
      if (f < theta || (f == theta && (leaving < 0 || arc < static_cast<std::size_t>(leaving)))) {
        theta = f;
        leaving = static_cast<std::ptrdiff_t>(arc);
      }
    }
    if (leaving < 0) throw std::logic_error("transport cycle without blocking arc");

    flow_[entering] += theta;
    for (std::size_t pos = 0; pos < cycle_.size(); ++pos) {
      if (pos % 2 == 0) flow_[cycle_[pos]] -= theta;
      else flow_[cycle_[pos]] += theta;
    }
    flow_[static_cast<std::size_t>(leaving)] = 0.0;
    in_basis_[static_cast<std::size_t>(leaving)] = false;
    in_basis_[entering] = true;
  }

  std::size_t parent_arc_of(std::size_t node) const {
    return static_cast<std::size_t>(parent_arc_[node]);
  }

  void path_of(std::size_t node, std::vector<std::size_t>& out) const {
    out.clear();
    std::ptrdiff_t v = static_cast<std::ptrdiff_t>(node);
    while (v >= 0) {
      out.push_back(static_cast<std::size_t>(v));
      v = parent_[v];
    }
  }

  std::size_t n_, m_;
  std::vector<Cost> cost_;
  Cost tol_;
  std::vector<double> flow_;
  std::vector<bool> in_basis_;
  std::vector<Cost> u_, v_;
  std::vector<std::ptrdiff_t> parent_, parent_arc_;
  std::vector<std::ptrdiff_t> adj_head_, adj_next_;
  std::vector<std::size_t> adj_arc_, stack_, path_src_, path_snk_, cycle_;
  std::vector<char> on_src_path_;
};

}  // namespace fmb
