#pragma once

// The space family X = R^s x Cone(G).
//
// A point is (u, g, r): spine coordinates u in R^s and an optional cone part
// (g, r) with g a link point and r > 0. The tangent cone at any point is
// again a member of the family, so tangent vectors use the same Point type,
// read in the tangent cone's ConeSpace:
//
//   * at a spine point the tangent cone is X itself;
//   * at a ray point over vertex v it is R^(s+1) x Cone(deg(v) isolated
//     vertices); spine coordinate s is the outward radial axis and the link
//     vertex with id e stands for leaving v along edge e;
//   * at a sector point it is R^(s+2); coordinate s is radial and s+1 is
//     tangential, positive toward increasing edge parameter.

#include <optional>
#include <string>
#include <vector>

#include "strata/metric_graph.hpp"

namespace strata {

struct ConePart {
  GraphPoint g;
  double r = 0.0;
  friend bool operator==(const ConePart&, const ConePart&) = default;
};

struct Point {
  std::vector<double> u;
  std::optional<ConePart> cone;

  double radius() const { return cone ? cone->r : 0.0; }
  bool on_spine() const { return !cone.has_value(); }

  friend bool operator==(const Point&, const Point&) = default;
};

/// A point of a tangent cone, read in that cone's ConeSpace.
using TangentVector = Point;

Point make_point(std::vector<double> u, std::optional<GraphPoint> g = std::nullopt, double r = 0.0);

enum class StratumKind { kSpine = 0, kRay = 1, kSector = 2 };

struct StratumId {
  StratumKind kind = StratumKind::kSpine;
  int id = 0;  // vertex id for rays, edge id for sectors
  int dim = 0;
  int codim = 0;
  friend bool operator==(const StratumId&, const StratumId&) = default;
};

std::string to_string(const StratumId& s);

class ConeSpace {
 public:
  ConeSpace() = default;

  /// Validates the link (CAT(1) girth condition) and throws ValidationError.
  static ConeSpace create(int spine_dim, MetricGraph link);
  /// Skips the CAT(1) check. Only for exercising cut-locus error paths.
  static ConeSpace unchecked(int spine_dim, MetricGraph link);

  int spine_dim() const { return spine_dim_; }
  const MetricGraph& link() const { return link_; }

  /// Dimension of the top stratum.
  int dim() const;

  Point apex() const { return Point{std::vector<double>(static_cast<std::size_t>(spine_dim_), 0.0), {}}; }

  /// Throws InvalidPointError for wrong spine length, r <= 0, or a link
  /// point outside the graph.
  void check_point(const Point& p) const;

  friend bool operator==(const ConeSpace& a, const ConeSpace& b) {
    return a.spine_dim_ == b.spine_dim_ && a.link_ == b.link_;
  }

 private:
  ConeSpace(int spine_dim, MetricGraph link) : spine_dim_(spine_dim), link_(std::move(link)) {}
  int spine_dim_ = 0;
  MetricGraph link_;
};

std::string describe(const ConeSpace& X);

ConeSpace tangent_cone(const ConeSpace& X, const Point& p);

double distance(const ConeSpace& X, const Point& p, const Point& q);

/// Constant-speed geodesic from p (t = 0) to q (t = 1). Throws
/// AmbiguousGeodesicError when two link paths of equal length < pi tie.
Point geodesic_point(const ConeSpace& X, const Point& p, const Point& q, double t);

/// log_p x, an element of tangent_cone(X, p). Throws CutLocusError when the
/// shortest path from p to x is not unique.
TangentVector log_map(const ConeSpace& X, const Point& p, const Point& x);

/// Small-step exponential: the point at distance t*|V| along the geodesic
/// leaving p with initial direction V. Throws StepTooLargeError when the
/// development would leave the region where it is valid.
Point shoot(const ConeSpace& X, const Point& p, const TangentVector& V, double t);

// Conical structure of a space read as a tangent cone (apex = origin).
double inner_product(const ConeSpace& T, const TangentVector& V, const TangentVector& W);
double norm(const TangentVector& V);
/// Angle in [0, pi]; zero when either vector vanishes.
double angle(const ConeSpace& T, const TangentVector& V, const TangentVector& W);

TangentVector scale(const TangentVector& V, double t);
/// V / |V|, or V itself when it vanishes.
TangentVector normalized(const TangentVector& V);

StratumId stratum_of(const ConeSpace& X, const Point& p);
int codim(const ConeSpace& X, const Point& p);

}  // namespace strata
