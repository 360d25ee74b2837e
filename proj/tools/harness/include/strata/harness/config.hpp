#pragma once

// Experiment configs: a space (gallery entry or explicit graph), a measure and
// optional command settings, stored as UTF-8 JSON.
//
//   {"name": "...",
//    "space": {"gallery": {"name": "spider", "params": {"k": 3}}}
//           | {"spine_dim": s, "graph": {"vertices": [...],
//                                        "edges": [{"id", "from", "to", "length"}]}},
//    "measure": {"atoms": [{"u": [...], "point": {"vertex": id} | {"edge": id, "t": x}
//                                                | {"arc": a} | null,
//                           "r": x, "weight": w}]},
//    "tol": 1e-9, "seed": 0, "directions": [...], "perturb": {...}}
//
// Gallery names: spider {k}, open_book {k, s}, kale {c}, sector {angle},
// euclidean {s}, theta {lengths: [a, b, c], s}, cone_over {graph, s}.
// {"arc": a} is accepted on kale spaces only and means arc position a.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "strata/errors.hpp"
#include "strata/frechet.hpp"

namespace strata::harness {

using Json = nlohmann::json;

/// Config problem with a field path such as "measure.atoms[1].weight".
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : ValidationError(field.empty() ? message : field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string name;
  ConeSpace space;
  DiscreteMeasure measure;
  /// Canonical JSON (sorted keys) of the parsed document.
  Json source;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  /// Optional explicit tangent directions for `grad`, read in the tangent
  /// cone at the mean.
  std::vector<Json> directions;
  /// Optional {"direction": point, "epsilon": x} for `perturb`.
  Json perturb;
  bool renormalized = false;
};

/// Weights whose sum is within this of 1 are rescaled; others are rejected.
inline constexpr double kRenormalizeTol = 1e-9;

ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const Json& doc);

ConeSpace parse_space(const Json& spec, const std::string& field);
GraphPoint parse_graph_point(const ConeSpace& X, const Json& spec, const std::string& field,
                             std::optional<double> kale_circumference);
Point parse_point(const ConeSpace& X, const Json& spec, const std::string& field,
                  std::optional<double> kale_circumference = std::nullopt);

/// 64-bit FNV-1a of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const Json& doc);

}  // namespace strata::harness
