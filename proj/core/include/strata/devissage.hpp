#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strata/cones.hpp"
#include "strata/limit_log.hpp"

namespace strata {

struct Ravel {
  ConeSpace space;
  DiscreteMeasure measure;  // mean at the apex of `space`
  ConvexCone working_cone;
  ResolvingChoice resolving;
};

struct DevissageTrace {
  /// ravels[0] is the initial ravel; ravels[i + 1] follows stages[i].
  std::vector<Ravel> ravels;
  std::vector<LimitStage> stages;
  /// Codimension of the apex of each ravel's space.
  std::vector<int> codims;
  ConeSpace terminal_space;
  StratumId terminal_stratum;
  /// Dimension of the terminal tangent space R^m.
  int m = 0;
  /// Index of the last stage; none when no stage was taken.
  std::optional<int> k;
  /// Whether each recomputed working cone had members outside the image of
  /// the previous one.
  std::vector<bool> recomputed_larger;
};

/// Tangent cone at the mean with the pushed-forward measure. Throws
/// NotRetractableError listing atoms without a unique log at the mean.
Ravel initial_ravel(const ConeSpace& X, const DiscreteMeasure& mu);

bool is_resolved(const Ravel& r);

/// One limit log along r.resolving. A resolved ravel with a spine direction
/// yields the identity stage and an unchanged ravel.
std::pair<Ravel, LimitStage> devissage_step(const Ravel& r);

/// Throws IterationBoundError past initial codim + 2 stages.
DevissageTrace run_devissage(const ConeSpace& X, const DiscreteMeasure& mu);

/// Nearest point of the terminal spine: the spine coordinates.
std::vector<double> terminal_projection(const ConeSpace& terminal, const TangentVector& W);

class CollapseMap {
 public:
  explicit CollapseMap(DevissageTrace trace) : trace_(std::move(trace)) {}

  const DevissageTrace& trace() const { return trace_; }
  const ConeSpace& domain() const { return trace_.ravels.front().space; }
  int m() const { return trace_.m; }

  /// L_k o ... o L_0 (V), in the terminal space.
  TangentVector composite(const TangentVector& V) const;
  /// P o L_k o ... o L_0 (V).
  std::vector<double> operator()(const TangentVector& V) const;

 private:
  DevissageTrace trace_;
};

CollapseMap collapse(const ConeSpace& X, const DiscreteMeasure& mu);

enum class CheckStatus { kPass, kFail, kVacuous };
std::string to_string(CheckStatus s);

struct PropertyCheck {
  std::string name;
  CheckStatus status = CheckStatus::kPass;
  double worst = 0.0;
  std::size_t samples = 0;
  std::string detail;
};

struct CollapseVerification {
  std::vector<PropertyCheck> checks;
  bool all_pass() const;
};

/// Properties (1)-(5) of a tangential collapse plus the hull-subspace check,
/// on the initial ravel's measure, with `sample_budget` random samples per
/// sampled property.
CollapseVerification verify_collapse(const CollapseMap& cm, std::size_t sample_budget,
                                     std::uint64_t seed);

}  // namespace strata
