#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fmb/bounds.hpp"
#include "fmb/metric.hpp"

namespace fmb::experiments {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

// One comparison record: a measured (or evaluated) statistic against the
// bound it must respect, with margin = bound - value.
struct ResultRow {
  double n = 0.0;
  std::string statistic;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool checked = true;  // rows that carry a pass/fail meaning
  bool passed = true;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::uint64_t seed = 0;
  std::string config_hash;
  bool all_passed = true;

  void add(double n, const std::string& stat, double value, double bound, bool checked = true);
  // Informational row, no bound attached.
  void note(double n, const std::string& stat, double value);
  // Deterministic CSV: comment header (hash, seed, version), then rows.
  std::string to_csv() const;
};

// FNV-1a over the canonical (key-sorted) config dump.
std::string config_hash(const json& config);

// Log-spaced N grid helper: {"from":, "to":, "points":, "log":true} or an
// explicit JSON array.
std::vector<double> parse_n_grid(const json& grid);

// Named space constructors shared by the commands:
//   {"kind":"random_line","k":10}      k uniform points of [0,1], 1-D coords
//   {"kind":"random_cube","k":16,"d":3} k uniform points of [0,1]^d
//   {"kind":"cycle","k":8}             uniform cycle-graph metric
//   {"kind":"grid","d":1,"p":2,"M":4}  dyadic grid as a Euclidean space
//   {"kind":"inline","doc":{...}}      space document
FiniteMetricSpace space_from_config(const json& source, Rng& rng);

// Closed-form bound tables: geometric min-over-m against the Occam,
// Rademacher and stability competitors over an N grid.
ResultTable cmd_bounds(const json& config);

// Rate-table report for one N, per the bounds module interface.
json bounds_report_json(const bounds::BoundInputs& in, const std::vector<int>& m_range);

// Same report built straight from a bounds config at sample size n.
json bounds_report_from_config(const json& config, double n);

// Monte-Carlo concentration study: exact W(P, P^N) per replicate against
// C1 and the deviation tail.
ResultTable cmd_concentration(const json& config);

// Generalization-gap study on small product spaces: brute-force sup gap,
// the duality intermediate L-bar W(P, P^N), and the adaptive bound.
ResultTable cmd_gap(const json& config);

// Embedding distortion audit against the worst-case tables.
ResultTable cmd_embed_audit(const json& config);

// Figure-data reproduction. Emits a CSV plus a gnuplot script.
struct FigureFiles {
  std::string csv;
  std::string gnuplot;
  ResultTable table;
};
FigureFiles cmd_figure(const std::string& name, const json& config);

}  // namespace fmb::experiments
