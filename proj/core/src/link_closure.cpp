#include <algorithm>
#include <cmath>

#include "strata/errors.hpp"
#include "strata/metric_graph.hpp"

namespace strata {
namespace {

constexpr double kRegionTol = 1e-12;

void insert_vertex(std::vector<VertexId>& vs, VertexId v) {
  auto it = std::lower_bound(vs.begin(), vs.end(), v);
  if (it == vs.end() || *it != v) vs.insert(it, v);
}

}  // namespace

std::vector<Interval>& SubgraphRegion::slot(EdgeId e) {
  auto it = std::lower_bound(intervals_.begin(), intervals_.end(), e,
                             [](const auto& entry, EdgeId id) { return entry.first < id; });
  if (it == intervals_.end() || it->first != e) it = intervals_.insert(it, {e, {}});
  return it->second;
}

void SubgraphRegion::add_point(const MetricGraph& g, const GraphPoint& p) {
  g.check_point(p);
  if (p.is_vertex()) {
    insert_vertex(vertices_, p.vertex_id());
  } else {
    add_interval(g, p.edge_id(), p.t(), p.t());
  }
}

void SubgraphRegion::add_interval(const MetricGraph& g, EdgeId e, double lo, double hi) {
  const Edge& ed = g.edge(e);
  if (lo > hi) std::swap(lo, hi);
  lo = std::clamp(lo, 0.0, ed.length);
  hi = std::clamp(hi, 0.0, ed.length);
  if (lo <= kRegionTol) {
    lo = 0.0;
    insert_vertex(vertices_, ed.from);
  }
  if (hi >= ed.length - kRegionTol) {
    hi = ed.length;
    insert_vertex(vertices_, ed.to);
  }
  // A degenerate interval sitting on an endpoint is just that vertex.
  if (hi - lo <= kRegionTol && (lo == 0.0 || hi == ed.length)) return;

  auto& list = slot(e);
  Interval merged{lo, hi};
  std::vector<Interval> kept;
  for (const Interval& iv : list) {
    if (iv.hi < merged.lo - kRegionTol || iv.lo > merged.hi + kRegionTol) {
      kept.push_back(iv);
    } else {
      merged.lo = std::min(merged.lo, iv.lo);
      merged.hi = std::max(merged.hi, iv.hi);
    }
  }
  kept.push_back(merged);
  std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  list = std::move(kept);
}

void SubgraphRegion::add_leg(const MetricGraph& g, const RouteLeg& leg) {
  add_interval(g, leg.edge, leg.t_begin, leg.t_end);
}

bool SubgraphRegion::contains(const MetricGraph& g, const GraphPoint& p, double tol) const {
  if (p.is_vertex()) {
    return std::binary_search(vertices_.begin(), vertices_.end(), p.vertex_id());
  }
  const Edge& e = g.edge(p.edge_id());
  if (p.t() <= tol && std::binary_search(vertices_.begin(), vertices_.end(), e.from)) return true;
  if (p.t() >= e.length - tol && std::binary_search(vertices_.begin(), vertices_.end(), e.to)) {
    return true;
  }
  for (const auto& [id, list] : intervals_) {
    if (id != p.edge_id()) continue;
    for (const Interval& iv : list) {
      if (p.t() >= iv.lo - tol && p.t() <= iv.hi + tol) return true;
    }
  }
  return false;
}

std::vector<GraphPoint> SubgraphRegion::extreme_points(const MetricGraph& g) const {
  std::vector<GraphPoint> out;
  for (VertexId v : vertices_) out.emplace_back(OnVertex{v});
  for (const auto& [id, list] : intervals_) {
    for (const Interval& iv : list) {
      if (iv.lo > 0.0) out.push_back(g.point_on_edge(id, iv.lo));
      if (iv.hi < g.edge(id).length && iv.hi != iv.lo) out.push_back(g.point_on_edge(id, iv.hi));
    }
  }
  return out;
}

bool SubgraphRegion::whole_edge(const MetricGraph& g, EdgeId e) const {
  for (const auto& [id, list] : intervals_) {
    if (id == e) {
      return list.size() == 1 && list[0].lo == 0.0 && list[0].hi == g.edge(e).length;
    }
  }
  return false;
}

SubgraphRegion SubgraphRegion::intersect(const MetricGraph& g, const SubgraphRegion& other) const {
  SubgraphRegion out;
  for (VertexId v : vertices_) {
    if (other.contains(g, OnVertex{v})) insert_vertex(out.vertices_, v);
  }
  for (const auto& [id, list] : intervals_) {
    for (const auto& [oid, olist] : other.intervals_) {
      if (oid != id) continue;
      for (const Interval& a : list) {
        for (const Interval& b : olist) {
          const double lo = std::max(a.lo, b.lo);
          const double hi = std::min(a.hi, b.hi);
          if (lo <= hi + kRegionTol) out.add_interval(g, id, lo, std::max(lo, hi));
        }
      }
    }
  }
  return out;
}

SubgraphRegion link_convex_closure(const MetricGraph& g, std::span<const GraphPoint> points) {
  SubgraphRegion region;
  for (const GraphPoint& p : points) region.add_point(g, p);
  return link_convex_closure(g, region);
}

SubgraphRegion link_convex_closure(const MetricGraph& g, const SubgraphRegion& start) {
  SubgraphRegion region = start;
  // Each pass adds routes between extreme points; extreme points only come
  // from the input or are vertices, so the loop reaches a fixpoint.
  for (std::size_t pass = 0; pass < 4 * (g.edges().size() + g.vertices().size() + 4); ++pass) {
    const SubgraphRegion before = region;
    const auto ext = region.extreme_points(g);
    for (std::size_t i = 0; i < ext.size(); ++i) {
      for (std::size_t j = i + 1; j < ext.size(); ++j) {
        const GraphDistance gd = graph_distance(g, ext[i], ext[j]);
        if (!(gd.distance < kPi - kPathTieTol) || gd.distance <= 0.0) continue;
        for (const RouteLeg& leg : g.route(ext[i], ext[j])) region.add_leg(g, leg);
      }
    }
    if (region == before) return region;
  }
  throw NumericalFailure("link convex closure did not reach a fixpoint");
}

}  // namespace strata
