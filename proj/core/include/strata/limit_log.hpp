#pragma once

// Limit tangent cones and limit log maps along a unit direction Z.
//
// For Z with a cone part at link point g_Z the target is the tangent cone at
// any point of the open ray through Z, and
//   L_Z(u, g, r) = (u, r cos th, r sin th on the side of the departure from g_Z toward g),
//   th = min(d(g_Z, g), pi),
// using the tangent-cone coordinates documented in cone_space.hpp. For a
// spine-only Z the map is the identity.

#include <cstddef>
#include <optional>
#include <vector>

#include "strata/frechet.hpp"

namespace strata {

struct TransportEntry {
  GraphPoint source;
  double theta = 0.0;
  /// Departure at g_Z toward `source`, when theta < pi and theta > 0.
  std::optional<Departure> side;
  bool tied = false;
};

struct LimitStage {
  ConeSpace source;
  TangentVector z;
  ConeSpace target;
  bool identity = false;
  /// Transport data for every vertex of the source link.
  std::vector<TransportEntry> transport;
  /// Atoms whose departure from g_Z was tied and broken by the smallest
  /// (edge id, heading).
  std::vector<std::size_t> tie_log;
};

ConeSpace limit_tangent_cone(const ConeSpace& X, const TangentVector& Z);

/// Builds the stage; Z is normalized. Throws ValidationError for Z = 0.
LimitStage make_limit_stage(const ConeSpace& X, const TangentVector& Z);

/// L_Z(V). Sets *tied when a departure tie had to be broken.
TangentVector limit_log(const LimitStage& stage, const TangentVector& V, bool* tied = nullptr);

/// Atomwise limit_log with weights kept; tied atom indices are appended to
/// *ties when given.
DiscreteMeasure pushforward_measure(const LimitStage& stage, const DiscreteMeasure& nu,
                                    std::vector<std::size_t>* ties = nullptr);

}  // namespace strata
