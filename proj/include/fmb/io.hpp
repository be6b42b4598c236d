#pragma once

#include <string>

#include <json.hpp>

#include "fmb/embed.hpp"
#include "fmb/learning.hpp"
#include "fmb/metric.hpp"
#include "fmb/transport.hpp"

namespace fmb::io {

using nlohmann::json;

// Space documents: {"points": [[...], ...], "dist": [[...], ...]}.
// "dist" may be omitted when coordinates are given (Euclidean distances
// are then computed); "points" may be omitted when "dist" is given.
json space_to_json(const FiniteMetricSpace& space);
FiniteMetricSpace space_from_json(const json& doc, std::size_t cap = kDefaultPointCap);

// Grids serialize to the same schema plus {"d":, "p":, "M":}.
json grid_to_json(const DyadicGrid& grid);
DyadicGrid grid_from_json(const json& doc, std::size_t cap = kDefaultPointCap);

// Packings: points plus {"delta":, "maximal":}.
json packing_to_json(const PackingSet& packing);

json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const json& doc, const FiniteMetricSpace& space);

json embedding_to_json(const Embedding& e);

// Dense CSV of a coupling matrix, one row per line.
std::string coupling_to_csv(const Coupling& coupling);

// MLP schema {"layers":[{"A":[[...]],"b":[...]}], "B":, "W":}.
json mlp_to_json(const ReLUMLP& mlp);
ReLUMLP mlp_from_json(const json& doc);

json hypothesis_to_json(const Hypothesis& h);

}  // namespace fmb::io
