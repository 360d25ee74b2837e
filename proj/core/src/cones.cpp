#include "strata/cones.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "link_profile.hpp"
#include "strata/errors.hpp"

namespace strata {
namespace {

constexpr double kDuplicateChord = 1e-12;
constexpr double kSectorPrefilter = 1e-6;
constexpr double kMeanAtApexTol = 1e-7;
// Cone parts this small relative to the vector are rounding residue of a
// flat midpoint and are dropped.
constexpr double kSnapRadius = 1e-12;

void push_unique(const ConeSpace& T, std::vector<TangentVector>& out, const TangentVector& v) {
  if (norm(v) == 0.0) return;
  TangentVector n = normalized(v);
  if (n.cone && n.cone->r <= kSnapRadius) {
    n.cone.reset();
    if (norm(n) == 0.0) return;
    n = normalized(n);
  }
  for (const auto& w : out) {
    if (distance(T, w, n) <= kDuplicateChord) return;
  }
  out.push_back(n);
}

std::vector<GraphPoint> region_samples(const MetricGraph& G, const SubgraphRegion& region) {
  std::vector<GraphPoint> out = region.extreme_points(G);
  for (const auto& [e, list] : region.intervals()) {
    for (const Interval& iv : list) {
      if (iv.hi > iv.lo) out.push_back(G.point_on_edge(e, 0.5 * (iv.lo + iv.hi)));
    }
  }
  return out;
}

std::vector<TangentVector> unit_cone_directions(const ConeSpace& T, const std::vector<GraphPoint>& gs) {
  std::vector<TangentVector> out;
  for (const GraphPoint& g : gs) {
    push_unique(T, out, Point{std::vector<double>(static_cast<std::size_t>(T.spine_dim()), 0.0),
                              ConePart{g, 1.0}});
  }
  return out;
}

// V inside the flat sector spanned by unit a, b (angle < pi)?
bool in_pair_sector(const ConeSpace& T, const TangentVector& a, const TangentVector& b,
                    const TangentVector& v, double tol) {
  const double ab = angle(T, a, b);
  if (!(ab < kPi - 1e-12) || ab <= kDuplicateChord) return false;
  const double va = angle(T, v, a);
  const double vb = angle(T, v, b);
  if (std::abs(va + vb - ab) > kSectorPrefilter) return false;
  // The chord point (1-s)a + s b makes angle va with a when
  // s / (1 - s) = sin(va) / sin(ab - va).
  const double beta = std::clamp(va, 0.0, ab);
  const double s1 = std::sin(beta);
  const double s0 = std::sin(ab - beta);
  const double s = s1 / (s0 + s1);
  const TangentVector w = geodesic_point(T, a, b, s);
  return distance(T, normalized(w), v) <= tol;
}

void check_mean_at_apex(const ConeSpace& T, const DiscreteMeasure& nu) {
  std::vector<double> ubar(static_cast<std::size_t>(T.spine_dim()), 0.0);
  for (const Atom& a : nu.atoms()) {
    for (std::size_t j = 0; j < ubar.size(); ++j) ubar[j] += a.weight * a.point.u[j];
  }
  double sq = 0.0;
  for (double x : ubar) sq += x * x;
  const auto hmax = maximize_link_support(T, nu);
  if (std::sqrt(sq) > kMeanAtApexTol || (hmax && hmax->value > kMeanAtApexTol)) {
    throw ValidationError("the measure's Frechet mean is not the apex of its tangent cone");
  }
}

std::vector<detail::WeightedLinkPoint> link_weights(const DiscreteMeasure& nu) {
  std::vector<detail::WeightedLinkPoint> pts;
  for (const Atom& a : nu.atoms()) {
    if (a.point.cone) pts.push_back({a.point.cone->g, a.weight * a.point.cone->r});
  }
  return pts;
}

// Key for the resolving-direction order; smaller is preferred.
std::tuple<int, int, double, std::vector<double>> direction_key(const ConeSpace& T,
                                                                const TangentVector& v) {
  const StratumId s = stratum_of(T, v);
  const double t = (v.cone && !v.cone->g.is_vertex()) ? v.cone->g.t() : 0.0;
  std::vector<double> neg_u;
  for (double x : v.u) neg_u.push_back(-x);
  return {-static_cast<int>(s.kind), s.id, t, neg_u};
}

}  // namespace

bool generated_membership(const ConeSpace& T, const std::vector<TangentVector>& support,
                          const TangentVector& V, double tol) {
  if (norm(V) == 0.0) return true;
  const TangentVector v = normalized(V);
  for (const auto& a : support) {
    if (distance(T, a, v) <= tol) return true;
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      if (in_pair_sector(T, support[i], support[j], v, tol)) return true;
    }
  }
  return false;
}

ConvexCone generated_cone(const ConeSpace& T, const std::vector<TangentVector>& directions) {
  ConvexCone C;
  C.ambient = T;
  C.kind = ConvexCone::Kind::kGenerated;
  for (const auto& d : directions) push_unique(T, C.generators, d);
  C.support = C.generators;
  return C;
}

bool escape_membership(const ConeSpace& T, const DiscreteMeasure& nu, const TangentVector& V,
                       double tol) {
  if (norm(V) == 0.0) return true;
  const TangentVector v = normalized(V);
  double sum = 0.0;
  for (const Atom& a : nu.atoms()) sum += a.weight * inner_product(T, a.point, v);
  return std::abs(sum) <= tol;
}

EscapeSections escape_sections(const ConeSpace& T, const DiscreteMeasure& nu, double tol) {
  nu.check(T);
  check_mean_at_apex(T, nu);
  EscapeSections out;
  out.spine = T.spine_dim() > 0;
  const MetricGraph& G = T.link();
  const auto pts = link_weights(nu);
  for (VertexId v : G.vertices()) {
    if (std::abs(detail::support_value(G, pts, OnVertex{v})) <= tol) out.zero_set.add_point(G, OnVertex{v});
  }
  for (const Edge& e : G.edges()) {
    for (const auto& piece : detail::edge_profile(G, e.id, pts)) {
      const double mid = 0.5 * (piece.a + piece.b);
      // A nonzero A cos t + B sin t + C has at most two zeros on a piece
      // shorter than 2*pi, so three small samples mean it vanishes.
      if (std::abs(piece.eval(piece.a)) <= tol && std::abs(piece.eval(piece.b)) <= tol &&
          std::abs(piece.eval(mid)) <= tol) {
        out.zero_set.add_interval(G, e.id, piece.a, piece.b);
        continue;
      }
      for (double t : detail::piece_max_candidates(piece)) {
        const GraphPoint g = G.point_on_edge(e.id, std::clamp(t, 0.0, e.length));
        if (std::abs(detail::support_value(G, pts, g)) <= tol) out.zero_set.add_point(G, g);
      }
    }
  }
  return out;
}

ConvexCone hull_cone(const ConeSpace& T, const DiscreteMeasure& nu, int depth) {
  nu.check(T);
  ConvexCone C;
  C.ambient = T;
  C.kind = ConvexCone::Kind::kHull;
  if (T.spine_dim() == 0) {
    std::vector<GraphPoint> gs;
    for (const Atom& a : nu.atoms()) {
      if (a.point.cone) gs.push_back(a.point.cone->g);
    }
    C.exact = true;
    C.exact_region = link_convex_closure(T.link(), gs);
    C.generators = unit_cone_directions(T, region_samples(T.link(), *C.exact_region));
    C.support = C.generators;
    return C;
  }
  std::vector<TangentVector> gens;
  for (const Atom& a : nu.atoms()) push_unique(T, gens, a.point);
  C.closure_depth = depth;
  for (int level = 0; level < depth && gens.size() < kMaxHullGenerators; ++level) {
    const std::size_t n = gens.size();
    for (std::size_t i = 0; i < n && gens.size() < kMaxHullGenerators; ++i) {
      for (std::size_t j = i + 1; j < n && gens.size() < kMaxHullGenerators; ++j) {
        if (!(angle(T, gens[i], gens[j]) < kPi - 1e-12)) continue;
        push_unique(T, gens, geodesic_point(T, gens[i], gens[j], 0.5));
      }
    }
  }
  C.generators = gens;
  C.support = gens;
  return C;
}

ConvexCone fluctuating_cone(const ConeSpace& T, const DiscreteMeasure& nu, int depth) {
  const EscapeSections E = escape_sections(T, nu);
  const ConvexCone H = hull_cone(T, nu, depth);
  ConvexCone C;
  C.ambient = T;
  C.kind = ConvexCone::Kind::kFluctuating;
  C.closure_depth = H.closure_depth;
  C.measure = nu;
  C.support = H.support;
  const MetricGraph& G = T.link();
  if (H.exact) {
    C.exact = true;
    C.exact_region = E.zero_set.intersect(G, *H.exact_region);
    C.generators = unit_cone_directions(T, region_samples(G, *C.exact_region));
    return C;
  }
  const auto s = static_cast<std::size_t>(T.spine_dim());
  auto consider = [&](const TangentVector& v) {
    if (norm(v) == 0.0) return;
    if (escape_membership(T, nu, v) && generated_membership(T, H.support, v)) {
      push_unique(T, C.generators, v);
    }
  };
  for (const auto& g : H.generators) consider(g);
  std::vector<TangentVector> spine_dirs;
  for (std::size_t j = 0; j < s; ++j) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> u(s, 0.0);
      u[j] = sign;
      spine_dirs.push_back(Point{u, {}});
    }
  }
  for (const Atom& a : nu.atoms()) {
    if (std::any_of(a.point.u.begin(), a.point.u.end(), [](double x) { return x != 0.0; })) {
      spine_dirs.push_back(Point{a.point.u, {}});
      spine_dirs.push_back(scale(Point{a.point.u, {}}, -1.0));
    }
  }
  for (const auto& v : spine_dirs) consider(v);
  for (const GraphPoint& g : region_samples(G, E.zero_set)) {
    const TangentVector up{std::vector<double>(s, 0.0), ConePart{g, 1.0}};
    consider(up);
    for (const auto& sd : spine_dirs) {
      const TangentVector sn = normalized(sd);
      consider(Point{scale(sn, std::sqrt(0.5)).u, ConePart{g, std::sqrt(0.5)}});
    }
  }
  return C;
}

bool cone_contains(const ConvexCone& C, const TangentVector& V, double tol) {
  if (norm(V) == 0.0) return true;
  if (C.exact && C.exact_region) {
    if (!V.cone) return false;
    return C.exact_region->contains(C.ambient.link(), V.cone->g, tol);
  }
  if (C.kind == ConvexCone::Kind::kFluctuating && C.measure &&
      !escape_membership(C.ambient, *C.measure, V)) {
    return false;
  }
  return generated_membership(C.ambient, C.support, V, tol);
}

ResolvingChoice resolving_direction(const ConvexCone& C) {
  ResolvingChoice out;
  const ConeSpace& T = C.ambient;
  const auto s = static_cast<std::size_t>(T.spine_dim());
  if (C.exact && C.exact_region && !C.exact_region->empty()) {
    const MetricGraph& G = T.link();
    std::optional<GraphPoint> pick;
    for (const auto& [e, list] : C.exact_region->intervals()) {
      for (const Interval& iv : list) {
        const double t = 0.5 * (iv.lo + iv.hi);
        const GraphPoint g = G.point_on_edge(e, t);
        if (!g.is_vertex()) {
          pick = g;
          break;
        }
      }
      if (pick) break;
    }
    if (!pick && !C.exact_region->vertices().empty()) pick = OnVertex{C.exact_region->vertices().front()};
    if (pick) {
      out.direction = Point{std::vector<double>(s, 0.0), ConePart{*pick, 1.0}};
      out.stratum = stratum_of(T, out.direction);
      return out;
    }
  }
  if (C.generators.empty()) {
    out.resolved_at_point = true;
    out.direction = T.apex();
    out.stratum = stratum_of(T, out.direction);
    return out;
  }
  const TangentVector* best = &C.generators.front();
  for (const auto& g : C.generators) {
    if (direction_key(T, g) < direction_key(T, *best)) best = &g;
  }
  out.direction = normalized(*best);
  out.stratum = stratum_of(T, out.direction);
  return out;
}

TangentVector require_resolving_direction(const ConvexCone& C) {
  const ResolvingChoice r = resolving_direction(C);
  if (r.resolved_at_point) throw EmptyConeError("the cone has no nonzero member");
  return r.direction;
}

}  // namespace strata
