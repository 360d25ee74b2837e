#pragma once

// Finite metric graphs used as links of cone spaces.
//
// Edge lengths are angles (radians). All-pairs vertex distances are computed
// once at construction with Dijkstra, so every query below is a constant
// number of table lookups plus endpoint case analysis. Graph values are
// immutable after construction and safe to share between threads.

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace strata {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Absolute tolerance used when comparing path lengths for ties.
inline constexpr double kPathTieTol = 1e-12;

struct VertexId {
  int value = 0;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct EdgeId {
  int value = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct Edge {
  EdgeId id;
  VertexId from;
  VertexId to;
  double length = 0.0;
};

struct OnVertex {
  VertexId vertex;
  friend bool operator==(const OnVertex&, const OnVertex&) = default;
};

/// Point strictly inside an edge, `t` measured from the edge's `from` end.
struct OnEdge {
  EdgeId edge;
  double t = 0.0;
  friend bool operator==(const OnEdge&, const OnEdge&) = default;
};

/// A point of a metric graph. Edge points are always strictly interior;
/// use MetricGraph::point_on_edge to normalize boundary parameters.
class GraphPoint {
 public:
  GraphPoint(OnVertex v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  GraphPoint(OnEdge e) : value_(e) {}    // NOLINT(google-explicit-constructor)

  static GraphPoint vertex(int id) { return OnVertex{VertexId{id}}; }

  bool is_vertex() const { return std::holds_alternative<OnVertex>(value_); }
  VertexId vertex_id() const { return std::get<OnVertex>(value_).vertex; }
  EdgeId edge_id() const { return std::get<OnEdge>(value_).edge; }
  double t() const { return std::get<OnEdge>(value_).t; }

  const std::variant<OnVertex, OnEdge>& value() const { return value_; }

  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;

 private:
  std::variant<OnVertex, OnEdge> value_;
};

/// Direction of travel along an edge: toward its `to` end (increasing t)
/// or toward its `from` end.
enum class Heading { kForward, kBackward };

struct Departure {
  EdgeId edge;
  Heading heading = Heading::kForward;
  friend auto operator<=>(const Departure&, const Departure&) = default;
};

struct PathDescriptor {
  double length = 0.0;
  Departure departure;
  /// Edge and heading on which the path reaches the target, when the
  /// target's incoming direction is unique.
  std::optional<Departure> arrival;
  bool multiple = false;
};

struct GraphDistance {
  double distance = kInfinity;
  /// Every distinct shortest-path departure at the source, ordered by
  /// (edge id, heading). Empty when the points coincide or are disconnected.
  std::vector<PathDescriptor> paths;
};

/// One edge traversal of a route: along `edge` from parameter `t_begin`
/// to `t_end` (either order).
struct RouteLeg {
  EdgeId edge;
  double t_begin = 0.0;
  double t_end = 0.0;
  double length() const { return t_end > t_begin ? t_end - t_begin : t_begin - t_end; }
};

struct Cat1Report {
  bool ok = true;
  /// Shortest cycle of length below 2*pi, as a closed edge sequence.
  std::vector<EdgeId> violating_cycle;
  double violating_length = kInfinity;
};

class MetricGraph {
 public:
  MetricGraph() = default;

  /// Validates ids, endpoints and lengths; throws ValidationError. Self-loops
  /// are rejected, parallel edges are allowed.
  MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges);

  std::span<const VertexId> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  bool empty() const { return vertices_.empty(); }
  bool has_edges() const { return !edges_.empty(); }

  bool has_vertex(VertexId v) const { return vertex_index_.contains(v.value); }
  bool has_edge(EdgeId e) const { return edge_index_.contains(e.value); }
  const Edge& edge(EdgeId e) const;

  /// Incident edge ids of `v`, sorted ascending.
  std::span<const EdgeId> incident(VertexId v) const;
  std::size_t degree(VertexId v) const { return incident(v).size(); }

  /// Edge point at parameter t, normalized to a vertex when t is within
  /// kPathTieTol of an end. Throws InvalidPointError when t is outside [0, L].
  GraphPoint point_on_edge(EdgeId e, double t) const;

  /// Throws InvalidPointError when `p` does not reference this graph.
  void check_point(const GraphPoint& p) const;

  /// Shortest-path distance between two vertices (infinity if disconnected).
  double vertex_distance(VertexId a, VertexId b) const;
  /// Distance from a vertex to an arbitrary point.
  double vertex_to_point(VertexId v, const GraphPoint& p) const;

  /// Connected-component label of a point.
  int component(const GraphPoint& p) const;

  /// Leaves the departure point of the route from `a` to `b` chosen by the
  /// smallest (edge id, heading) departure, then follows shortest paths.
  std::vector<RouteLeg> route(const GraphPoint& a, const GraphPoint& b) const;

  /// The point at arclength `s` along route(a, b).
  GraphPoint walk(const GraphPoint& a, const GraphPoint& b, double s) const;

  /// The point reached by travelling `s` from `a` along `d`, continuing
  /// through vertices of degree two. Returns nullopt when the walk would
  /// have to pass through a vertex of any other degree.
  std::optional<GraphPoint> advance(const GraphPoint& a, Departure d, double s) const;

  friend bool operator==(const MetricGraph& a, const MetricGraph& b);

 private:
  std::size_t vidx(VertexId v) const;
  std::size_t eidx(EdgeId e) const;
  void compute_all_pairs();

  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<int, std::size_t> vertex_index_;
  std::unordered_map<int, std::size_t> edge_index_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<double> dist_;  // row-major |V| x |V|
  std::vector<int> component_;
};

GraphDistance graph_distance(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b);

/// min(graph distance, pi): the angular metric on the link.
double angular_distance(const MetricGraph& g, const GraphPoint& a, const GraphPoint& b);

/// Cone(G) is CAT(0) iff every embedded cycle of G has length >= 2*pi.
Cat1Report validate_cat1(const MetricGraph& g);

std::string to_string(const GraphPoint& p);

// ---------------------------------------------------------------------------
// Closed subsets of a graph and convex closure under short geodesics.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A closed subset of a metric graph: isolated vertices plus closed
/// parameter intervals on edges. Intervals on one edge are disjoint and
/// sorted; an interval that reaches an edge end implies that end's vertex.
class SubgraphRegion {
 public:
  SubgraphRegion() = default;

  void add_point(const MetricGraph& g, const GraphPoint& p);
  void add_interval(const MetricGraph& g, EdgeId e, double lo, double hi);
  void add_leg(const MetricGraph& g, const RouteLeg& leg);

  bool contains(const MetricGraph& g, const GraphPoint& p, double tol = 1e-9) const;
  bool empty() const { return vertices_.empty() && intervals_.empty(); }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  /// Edge id -> sorted disjoint intervals.
  const std::vector<std::pair<EdgeId, std::vector<Interval>>>& intervals() const {
    return intervals_;
  }

  /// Vertices of the region plus every interval endpoint.
  std::vector<GraphPoint> extreme_points(const MetricGraph& g) const;

  bool whole_edge(const MetricGraph& g, EdgeId e) const;

  SubgraphRegion intersect(const MetricGraph& g, const SubgraphRegion& other) const;

  friend bool operator==(const SubgraphRegion&, const SubgraphRegion&) = default;

 private:
  std::vector<Interval>& slot(EdgeId e);
  std::vector<VertexId> vertices_;
  std::vector<std::pair<EdgeId, std::vector<Interval>>> intervals_;
};

/// Smallest closed subset containing `points` that is closed under adding
/// every shortest path of length < pi between two of its points.
SubgraphRegion link_convex_closure(const MetricGraph& g, std::span<const GraphPoint> points);
SubgraphRegion link_convex_closure(const MetricGraph& g, const SubgraphRegion& region);

}  // namespace strata
