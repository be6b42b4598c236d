#include "fmb/io.hpp"

#include <sstream>

#include "fmb/errors.hpp"

namespace fmb::io {

json space_to_json(const FiniteMetricSpace& space) {
  json doc;
  if (space.has_coords()) {
    json pts = json::array();
    for (std::size_t i = 0; i < space.size(); ++i)
      pts.push_back(std::vector<double>(space.coords(i), space.coords(i) + space.coord_dim()));
    doc["points"] = std::move(pts);
  }
  json dist = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < space.size(); ++j) row.push_back(space.dist(i, j));
    dist.push_back(std::move(row));
  }
  doc["dist"] = std::move(dist);
  return doc;
}

FiniteMetricSpace space_from_json(const json& doc, std::size_t cap) {
  std::optional<std::vector<std::vector<double>>> coords;
  if (doc.contains("points"))
    coords = doc.at("points").get<std::vector<std::vector<double>>>();
  if (doc.contains("dist")) {
    const auto rows = doc.at("dist").get<std::vector<std::vector<double>>>();
    const std::size_t k = rows.size();
    std::vector<double> dist;
    dist.reserve(k * k);
    for (const auto& row : rows) {
      if (row.size() != k) throw ConfigError("dist", "matrix is not square");
      dist.insert(dist.end(), row.begin(), row.end());
    }
    return build_space(std::move(dist), k, std::move(coords), cap);
  }
  if (!coords) throw ConfigError("space", "needs \"points\" or \"dist\"");
  return build_space_euclidean(*coords, cap);
}

json grid_to_json(const DyadicGrid& grid) {
  json doc;
  doc["d"] = grid.d;
  doc["p"] = grid.p;
  doc["M"] = grid.M;
  json pts = json::array();
  for (std::size_t i = 0; i < grid.size(); ++i)
    pts.push_back(std::vector<double>(grid.point(i), grid.point(i) + grid.d));
  doc["points"] = std::move(pts);
  return doc;
}

DyadicGrid grid_from_json(const json& doc, std::size_t cap) {
  return dyadic_grid(doc.at("d").get<int>(), doc.at("p").get<int>(),
                     doc.at("M").get<std::int64_t>(), cap);
}

json packing_to_json(const PackingSet& packing) {
  json doc;
  doc["delta"] = packing.delta;
  doc["maximal"] = packing.maximal;
  json pts = json::array();
  for (std::size_t i = 0; i < packing.size(); ++i)
    pts.push_back(std::vector<double>(packing.point(i), packing.point(i) + packing.d));
  doc["points"] = std::move(pts);
  return doc;
}

json measure_to_json(const DiscreteMeasure& mu) { return json{{"weights", mu.weights}}; }

DiscreteMeasure measure_from_json(const json& doc, const FiniteMetricSpace& space) {
  return make_measure(space, doc.at("weights").get<std::vector<double>>());
}

json embedding_to_json(const Embedding& e) {
  json images = json::array();
  for (std::size_t i = 0; i < e.k(); ++i)
    images.push_back(std::vector<double>(e.image(i), e.image(i) + e.m));
  json recipe{{"kind", to_string(e.recipe.kind)},
              {"seed", e.recipe.seed},
              {"target_m", e.recipe.target_m},
              {"attempts", e.recipe.attempts},
              {"guarantee_met", e.recipe.guarantee_met}};
  return json{{"m", e.m},           {"images", std::move(images)},
              {"lip_lower", e.lip_lower}, {"lip_upper", e.lip_upper},
              {"tau", e.tau},       {"recipe", std::move(recipe)}};
}

std::string coupling_to_csv(const Coupling& coupling) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < coupling.k; ++i) {
    for (std::size_t j = 0; j < coupling.k; ++j) {
      if (j) out << ',';
      out << coupling.entry(i, j);
    }
    out << '\n';
  }
  return out.str();
}

json mlp_to_json(const ReLUMLP& mlp) {
  json layers = json::array();
  for (const auto& layer : mlp.layers)
    layers.push_back(json{{"A", layer.weights}, {"b", layer.bias}});
  return json{{"layers", std::move(layers)},
              {"B", mlp.weight_bound},
              {"W", mlp.width},
              {"depth", mlp.depth}};
}

ReLUMLP mlp_from_json(const json& doc) {
  ReLUMLP mlp;
  mlp.weight_bound = doc.at("B").get<double>();
  mlp.width = doc.at("W").get<int>();
  for (const auto& layer_doc : doc.at("layers")) {
    ReluLayer layer;
    layer.weights = layer_doc.at("A").get<std::vector<std::vector<double>>>();
    layer.bias = layer_doc.at("b").get<std::vector<double>>();
    mlp.layers.push_back(std::move(layer));
  }
  mlp.depth = doc.contains("depth") ? doc.at("depth").get<int>()
                                    : static_cast<int>(mlp.layers.size()) - 1;
  validate_mlp(mlp);
  return mlp;
}

json hypothesis_to_json(const Hypothesis& h) {
  return json{{"table", h.table}, {"lip_upper", h.lip_upper}};
}

}  // namespace fmb::io
