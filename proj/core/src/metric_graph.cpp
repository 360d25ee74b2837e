#include "strata/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "strata/errors.hpp"

namespace strata {
namespace {

struct DijkstraResult {
  std::vector<double> dist;
  std::vector<int> pred_edge;  // index into edges, -1 at the source
};

// Dijkstra over vertex indices. `skip_edge` (an edge index) is ignored, which
// is how the shortest cycle through that edge is found.
DijkstraResult dijkstra(std::size_t n, std::span<const Edge> edges,
                        const std::vector<std::vector<std::size_t>>& adj,
                        const std::vector<std::pair<std::size_t, std::size_t>>& ends,
                        std::size_t source, int skip_edge) {
  DijkstraResult r{std::vector<double>(n, kInfinity), std::vector<int>(n, -1)};
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  r.dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    auto [d, v] = queue.top();
    queue.pop();
    if (d > r.dist[v]) continue;
    for (std::size_t ei : adj[v]) {
      if (static_cast<int>(ei) == skip_edge) continue;
      const std::size_t w = ends[ei].first == v ? ends[ei].second : ends[ei].first;
      const double nd = d + edges[ei].length;
      if (nd < r.dist[w]) {
        r.dist[w] = nd;
        r.pred_edge[w] = static_cast<int>(ei);
        queue.emplace(nd, w);
      }
    }
  }
  return r;
}

Heading away_from(const Edge& e, VertexId v) {
  return e.from == v ? Heading::kForward : Heading::kBackward;
}

Heading reversed(Heading h) {
  return h == Heading::kForward ? Heading::kBackward : Heading::kForward;
}

// Candidate path length for each departure at `a` toward `b`.
std::vector<std::pair<Departure, double>> departure_lengths(const MetricGraph& g,
                                                            const GraphPoint& a,
                                                            const GraphPoint& b) {
  std::vector<std::pair<Departure, double>> out;
  if (a.is_vertex()) {
    const VertexId v = a.vertex_id();
    for (EdgeId eid : g.incident(v)) {
      const Edge& e = g.edge(eid);
      const Heading h = away_from(e, v);
      double len;
      if (!b.is_vertex() && b.edge_id() == eid) {
        len = h == Heading::kForward ? b.t() : e.length - b.t();
      } else {
        const VertexId other = h == Heading::kForward ? e.to : e.from;
        len = e.length + g.vertex_to_point(other, b);
      }
      out.push_back({Departure{eid, h}, len});
    }
  } else {
    const Edge& e = g.edge(a.edge_id());
    const double t = a.t();
    const bool same_edge = !b.is_vertex() && b.edge_id() == e.id;
    double fwd = (same_edge && b.t() > t) ? b.t() - t : (e.length - t) + g.vertex_to_point(e.to, b);
    double bwd = (same_edge && b.t() < t) ? t - b.t() : t + g.vertex_to_point(e.from, b);
    out.push_back({Departure{e.id, Heading::kBackward}, bwd});
    out.push_back({Departure{e.id, Heading::kForward}, fwd});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

double param_at_vertex(const Edge& e, VertexId v) { return e.from == v ? 0.0 : e.length; }

}  // namespace

MetricGraph::MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vertex_index_.emplace(vertices_[i].value, i).second) {
      throw ValidationError("duplicate vertex id " + std::to_string(vertices_[i].value));
    }
  }
  incident_.assign(vertices_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (!edge_index_.emplace(e.id.value, i).second) {
      throw ValidationError("duplicate edge id " + std::to_string(e.id.value));
    }
    if (!has_vertex(e.from) || !has_vertex(e.to)) {
      throw ValidationError("edge " + std::to_string(e.id.value) +
                            " references an unknown vertex");
    }
    if (e.from == e.to) {
      throw ValidationError("edge " + std::to_string(e.id.value) + " is a self-loop");
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      throw ValidationError("edge " + std::to_string(e.id.value) +
                            " must have finite positive length");
    }
    incident_[vidx(e.from)].push_back(e.id);
    incident_[vidx(e.to)].push_back(e.id);
  }
  for (auto& list : incident_) std::sort(list.begin(), list.end());
  compute_all_pairs();
}

void MetricGraph::compute_all_pairs() {
  const std::size_t n = vertices_.size();
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::pair<std::size_t, std::size_t>> ends(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    ends[i] = {vidx(edges_[i].from), vidx(edges_[i].to)};
    adj[ends[i].first].push_back(i);
    adj[ends[i].second].push_back(i);
  }
  dist_.assign(n * n, kInfinity);
  component_.assign(n, -1);
  int next_component = 0;
  for (std::size_t s = 0; s < n; ++s) {
    auto r = dijkstra(n, edges_, adj, ends, s, -1);
    std::copy(r.dist.begin(), r.dist.end(), dist_.begin() + static_cast<std::ptrdiff_t>(s * n));
    if (component_[s] < 0) {
      for (std::size_t w = 0; w < n; ++w) {
        if (std::isfinite(r.dist[w])) component_[w] = next_component;
      }
      ++next_component;
    }
  }
}

std::size_t MetricGraph::vidx(VertexId v) const {
  auto it = vertex_index_.find(v.value);
  if (it == vertex_index_.end()) {
    throw InvalidPointError("unknown vertex " + std::to_string(v.value));
  }
  return it->second;
}

std::size_t MetricGraph::eidx(EdgeId e) const {
  auto it = edge_index_.find(e.value);
  if (it == edge_index_.end()) {
    throw InvalidPointError("unknown edge " + std::to_string(e.value));
  }
  return it->second;
}

const Edge& MetricGraph::edge(EdgeId e) const { return edges_[eidx(e)]; }

std::span<const EdgeId> MetricGraph::incident(VertexId v) const { return incident_[vidx(v)]; }

GraphPoint MetricGraph::point_on_edge(EdgeId e, double t) const {
  const Edge& ed = edge(e);
  if (!(t >= -kPathTieTol && t <= ed.length + kPathTieTol)) {
    throw InvalidPointError("parameter " + std::to_string(t) + " outside edge " +
                            std::to_string(e.value));
  }
  if (t <= kPathTieTol) return OnVertex{ed.from};
  if (t >= ed.length - kPathTieTol) return OnVertex{ed.to};
  return OnEdge{e, t};
}

void MetricGraph::check_point(const GraphPoint& p) const {
  if (p.is_vertex()) {
    (void)vidx(p.vertex_id());
    return;
  }
  const Edge& e = edge(p.edge_id());
  if (!(p.t() > 0.0 && p.t() < e.length)) {
    throw InvalidPointError("edge point " + to_string(p) + " is not strictly interior");
  }
}

double MetricGraph::vertex_distance(VertexId a, VertexId b) const {
  return dist_[vidx(a) * vertices_.size() + vidx(b)];
}

double MetricGraph::vertex_to_point(VertexId v, const GraphPoint& p) const {
  if (p.is_vertex()) return vertex_distance(v, p.vertex_id());
  const Edge& e = edge(p.edge_id());
  return std::min(p.t() + vertex_distance(v, e.from),
                  (e.length - p.t()) + vertex_distance(v, e.to));
}

int MetricGraph::component(const GraphPoint& p) const {
  if (p.is_vertex()) return component_[vidx(p.vertex_id())];
  return component_[vidx(edge(p.edge_id()).from)];
}

std::vector<RouteLeg> MetricGraph::route(const GraphPoint& a, const GraphPoint& b) const {
  const GraphDistance gd = graph_distance(*this, a, b);
  if (!std::isfinite(gd.distance)) {
    throw InvalidPointError("no route between " + to_string(a) + " and " + to_string(b));
  }
  std::vector<RouteLeg> legs;
  if (gd.paths.empty()) return legs;

  const Departure d = gd.paths.front().departure;
  const Edge& first = edge(d.edge);
  const double t0 = a.is_vertex() ? param_at_vertex(first, a.vertex_id()) : a.t();
  const bool forward = d.heading == Heading::kForward;
  if (!b.is_vertex() && b.edge_id() == d.edge &&
      std::abs(std::abs(b.t() - t0) - gd.distance) <= kPathTieTol * 8 &&
      (forward ? b.t() > t0 : b.t() < t0)) {
    legs.push_back({d.edge, t0, b.t()});
    return legs;
  }
  legs.push_back({d.edge, t0, forward ? first.length : 0.0});
  VertexId w = forward ? first.to : first.from;

  for (std::size_t guard = 0; guard <= edges_.size() + 1; ++guard) {
    if (b.is_vertex() && b.vertex_id() == w) return legs;
    const double remaining = vertex_to_point(w, b);
    bool advanced = false;
    for (const auto& [dep, len] : departure_lengths(*this, OnVertex{w}, b)) {
      if (std::abs(len - remaining) > kPathTieTol * 8) continue;
      const Edge& e = edge(dep.edge);
      const double start = param_at_vertex(e, w);
      if (!b.is_vertex() && b.edge_id() == dep.edge) {
        legs.push_back({dep.edge, start, b.t()});
        return legs;
      }
      const bool fwd = dep.heading == Heading::kForward;
      legs.push_back({dep.edge, start, fwd ? e.length : 0.0});
      w = fwd ? e.to : e.from;
      advanced = true;
      break;
    }
    if (!advanced) break;
  }
  throw NumericalFailure("route reconstruction failed between " + to_string(a) + " and " +
                         to_string(b));
}

GraphPoint MetricGraph::walk(const GraphPoint& a, const GraphPoint& b, double s) const {
  if (s <= 0.0) return a;
  double acc = 0.0;
  for (const RouteLeg& leg : route(a, b)) {
    const double len = leg.length();
    if (s <= acc + len) {
      const double off = s - acc;
      const double t = leg.t_end > leg.t_begin ? leg.t_begin + off : leg.t_begin - off;
      return point_on_edge(leg.edge, std::clamp(t, 0.0, edge(leg.edge).length));
    }
    acc += len;
  }
  return b;
}

std::optional<GraphPoint> MetricGraph::advance(const GraphPoint& a, Departure d,
                                               double s) const {
  if (s <= kPathTieTol) return a;
  const Edge* e = &edge(d.edge);
  double t;
  if (a.is_vertex()) {
    if (e->from != a.vertex_id() && e->to != a.vertex_id()) {
      throw InvalidPointError("departure edge is not incident to " + to_string(a));
    }
    t = param_at_vertex(*e, a.vertex_id());
  } else {
    if (a.edge_id() != d.edge) {
      throw InvalidPointError("departure edge does not contain " + to_string(a));
    }
    t = a.t();
  }
  Heading h = d.heading;
  for (std::size_t guard = 0; guard < 1000000; ++guard) {
    const double room = h == Heading::kForward ? e->length - t : t;
    if (s < room - kPathTieTol) {
      return point_on_edge(e->id, h == Heading::kForward ? t + s : t - s);
    }
    const VertexId w = h == Heading::kForward ? e->to : e->from;
    if (std::abs(s - room) <= kPathTieTol) return OnVertex{w};
    if (degree(w) != 2) return std::nullopt;
    s -= room;
    auto inc = incident(w);
    const EdgeId next = inc[0] == e->id ? inc[1] : inc[0];
    e = &edge(next);
    h = away_from(*e, w);
    t = param_at_vertex(*e, w);
  }
  return std::nullopt;
}

bool operator==(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertices_ != b.vertices_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const Edge& x = a.edges_[i];
    const Edge& y = b.edges_[i];
    if (x.id != y.id || x.from != y.from || x.to != y.to || x.length != y.length) return false;
  }
  return true;
}

GraphDistance graph_distance(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b) {
  g.check_point(a);
  g.check_point(b);
  GraphDistance out;
  if (a == b) {
    out.distance = 0.0;
    return out;
  }
  const auto candidates = departure_lengths(g, a, b);
  double best = kInfinity;
  for (const auto& c : candidates) best = std::min(best, c.second);
  out.distance = best;
  if (!std::isfinite(best)) return out;

  // The arrival direction is the reverse of the unique departure at b.
  std::optional<Departure> arrival;
  {
    const auto back = departure_lengths(g, b, a);
    int count = 0;
    for (const auto& c : back) {
      if (std::abs(c.second - best) <= kPathTieTol) {
        ++count;
        arrival = Departure{c.first.edge, reversed(c.first.heading)};
      }
    }
    if (count != 1) arrival.reset();
  }
  for (const auto& c : candidates) {
    if (std::abs(c.second - best) <= kPathTieTol) {
      out.paths.push_back(PathDescriptor{best, c.first, arrival, false});
    }
  }
  if (out.paths.size() > 1) {
    for (auto& p : out.paths) p.multiple = true;
  }
  return out;
}

double angular_distance(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b) {
  g.check_point(a);
  g.check_point(b);
  if (a == b) return 0.0;
  double best = kInfinity;
  if (a.is_vertex()) {
    best = g.vertex_to_point(a.vertex_id(), b);
  } else {
    const Edge& e = g.edge(a.edge_id());
    best = std::min(a.t() + g.vertex_to_point(e.from, b),
                    (e.length - a.t()) + g.vertex_to_point(e.to, b));
    if (!b.is_vertex() && b.edge_id() == e.id) best = std::min(best, std::abs(a.t() - b.t()));
  }
  return std::min(best, kPi);
}

Cat1Report validate_cat1(const MetricGraph& g) {
  Cat1Report report;
  const auto vertices = g.vertices();
  const auto edges = g.edges();
  const std::size_t n = vertices.size();
  std::unordered_map<int, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(vertices[i].value, i);
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::pair<std::size_t, std::size_t>> ends(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    ends[i] = {index.at(edges[i].from.value), index.at(edges[i].to.value)};
    adj[ends[i].first].push_back(i);
    adj[ends[i].second].push_back(i);
  }
  // Shortest cycle through edge e = e plus the shortest path between its
  // endpoints avoiding e; the minimum over edges is the girth.
  for (std::size_t ei = 0; ei < edges.size(); ++ei) {
    auto r = dijkstra(n, edges, adj, ends, ends[ei].second, static_cast<int>(ei));
    const double cycle = edges[ei].length + r.dist[ends[ei].first];
    if (cycle < report.violating_length) {
      report.violating_length = cycle;
      report.violating_cycle.clear();
      report.violating_cycle.push_back(edges[ei].id);
      std::size_t v = ends[ei].first;
      while (std::isfinite(cycle) && r.pred_edge[v] >= 0) {
        const auto pe = static_cast<std::size_t>(r.pred_edge[v]);
        report.violating_cycle.push_back(edges[pe].id);
        v = ends[pe].first == v ? ends[pe].second : ends[pe].first;
      }
    }
  }
  if (report.violating_length >= 2.0 * kPi - kPathTieTol) {
    report.ok = true;
    report.violating_cycle.clear();
    report.violating_length = kInfinity;
  } else {
    report.ok = false;
  }
  return report;
}

std::string to_string(const GraphPoint& p) {
  std::ostringstream os;
  if (p.is_vertex()) {
    os << "v" << p.vertex_id().value;
  } else {
    os << "e" << p.edge_id().value << "@" << p.t();
  }
  return os.str();
}

}  // namespace strata
