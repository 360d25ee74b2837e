#pragma once

// Escape cone, hull and fluctuating cone of a measure that lives in a tangent
// cone T with its Frechet mean at the apex of T.
//
// For such a measure the directional derivative at the apex is
//   grad F(u, g, rho) = -(ubar . u + rho h(g)),  h(g) = sum_i w_i r_i cos(min(d(g, g_i), pi)),
// and ubar = 0, so E = {rho = 0} union {h(g) = 0}. This is exact for every
// spine dimension. Hulls are exact for spine dimension 0 (cone over the link
// convex closure) and approximated by midpoint closure otherwise.

#include <optional>
#include <vector>

#include "strata/frechet.hpp"

namespace strata {

inline constexpr double kEscapeTol = 1e-9;
inline constexpr double kHullTol = 1e-8;
inline constexpr int kDefaultClosureDepth = 4;
inline constexpr std::size_t kMaxHullGenerators = 48;

struct ConvexCone {
  enum class Kind { kHull, kFluctuating, kGenerated };

  ConeSpace ambient;
  Kind kind = Kind::kGenerated;
  /// Unit members. Empty means the cone is {0}.
  std::vector<TangentVector> generators;
  int closure_depth = 0;
  bool exact = false;
  /// Link part of the cone when exact (spine dimension 0).
  std::optional<SubgraphRegion> exact_region;
  /// Directions whose generated cone is used for approximate membership
  /// (hull generators for fluctuating cones).
  std::vector<TangentVector> support;
  /// Measure whose escape cone cuts out a fluctuating cone.
  std::optional<DiscreteMeasure> measure;

  bool is_zero() const { return generators.empty(); }
};

/// Membership in C; V = 0 is always a member.
bool cone_contains(const ConvexCone& C, const TangentVector& V, double tol = kHullTol);

/// A cone generated by the given directions (normalized, deduplicated),
/// with approximate membership.
ConvexCone generated_cone(const ConeSpace& T, const std::vector<TangentVector>& directions);

/// Membership of V in the cone generated by `support`: V parallel to a
/// support direction or inside the flat sector spanned by two of them.
bool generated_membership(const ConeSpace& T, const std::vector<TangentVector>& support,
                          const TangentVector& V, double tol = kHullTol);

/// |grad F(V / |V|)| <= tol at the apex of T.
bool escape_membership(const ConeSpace& T, const DiscreteMeasure& nu, const TangentVector& V,
                       double tol = kEscapeTol);

struct EscapeSections {
  /// Unit spine directions all lie in E (spine dimension > 0).
  bool spine = false;
  /// Link points g with h(g) = 0; the unit directions of E off the spine are
  /// those whose link part lies here.
  SubgraphRegion zero_set;
  bool approximate = false;
};

/// Throws ValidationError when the mean of nu is not the apex of T.
EscapeSections escape_sections(const ConeSpace& T, const DiscreteMeasure& nu, double tol = kEscapeTol);

ConvexCone hull_cone(const ConeSpace& T, const DiscreteMeasure& nu, int depth = kDefaultClosureDepth);

ConvexCone fluctuating_cone(const ConeSpace& T, const DiscreteMeasure& nu,
                            int depth = kDefaultClosureDepth);

struct ResolvingChoice {
  /// C = {0}: nothing to resolve.
  bool resolved_at_point = false;
  TangentVector direction;
  StratumId stratum;
};

/// Unit member of C in the highest-dimensional stratum (sector > ray >
/// spine). Ties: smallest stratum id, then smallest link parameter, then
/// lexicographically largest spine coordinates. For exact cones a sector
/// interval is represented by its midpoint.
ResolvingChoice resolving_direction(const ConvexCone& C);

/// Same, but throws EmptyConeError when C = {0}.
TangentVector require_resolving_direction(const ConvexCone& C);

}  // namespace strata
