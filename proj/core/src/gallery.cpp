#include "strata/gallery.hpp"

#include <cmath>
#include <string>

#include "strata/errors.hpp"

namespace strata::gallery {
namespace {

MetricGraph isolated(int k) {
  if (k < 0) throw ValidationError("vertex count must be nonnegative");
  std::vector<VertexId> vs;
  for (int i = 1; i <= k; ++i) vs.push_back(VertexId{i});
  return MetricGraph(std::move(vs), {});
}

}  // namespace

ConeSpace spider(int k) { return ConeSpace::create(0, isolated(k)); }

ConeSpace open_book(int k, int s) { return ConeSpace::create(s, isolated(k)); }

ConeSpace kale(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("kale circumference must be positive");
  const double half = 0.5 * c;
  MetricGraph g({VertexId{0}, VertexId{1}},
                {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, half},
                 Edge{EdgeId{1}, VertexId{1}, VertexId{0}, half}});
  return ConeSpace::create(0, std::move(g));
}

GraphPoint kale_point(double c, double a) {
  const double half = 0.5 * c;
  a = std::fmod(a, c);
  if (a < 0.0) a += c;
  if (a <= kPathTieTol || a >= c - kPathTieTol) return GraphPoint::vertex(0);
  if (std::abs(a - half) <= kPathTieTol) return GraphPoint::vertex(1);
  if (a < half) return OnEdge{EdgeId{0}, a};
  return OnEdge{EdgeId{1}, a - half};
}

ConeSpace sector(double opening) {
  MetricGraph g({VertexId{0}, VertexId{1}}, {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, opening}});
  return ConeSpace::create(0, std::move(g));
}

ConeSpace euclidean(int s) { return ConeSpace::create(s, MetricGraph{}); }

ConeSpace cone_over(MetricGraph link, int s) { return ConeSpace::create(s, std::move(link)); }

MetricGraph theta_graph(double l0, double l1, double l2) {
  return MetricGraph({VertexId{0}, VertexId{1}},
                     {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, l0},
                      Edge{EdgeId{1}, VertexId{0}, VertexId{1}, l1},
                      Edge{EdgeId{2}, VertexId{0}, VertexId{1}, l2}});
}

}  // namespace strata::gallery
