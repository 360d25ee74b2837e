#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "strata/errors.hpp"
#include "strata/gallery.hpp"
#include "strata/metric_graph.hpp"
#include "strata/random.hpp"
#include "strata/sampling.hpp"

namespace strata {
namespace {

MetricGraph single_edge(double len) {
  return MetricGraph({VertexId{0}, VertexId{1}}, {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, len}});
}

MetricGraph two_edge_cycle(double a, double b) {
  return MetricGraph({VertexId{1}, VertexId{2}},
                     {Edge{EdgeId{0}, VertexId{1}, VertexId{2}, a}, Edge{EdgeId{1}, VertexId{2}, VertexId{1}, b}});
}

MetricGraph isolated(int k) {
  std::vector<VertexId> vs;
  for (int i = 1; i <= k; ++i) vs.push_back(VertexId{i});
  return MetricGraph(vs, {});
}

TEST(GraphDistance, IntervalMetricOnOneEdge) {
  const MetricGraph g = single_edge(2.0);
  const GraphDistance d = graph_distance(g, OnEdge{EdgeId{0}, 0.5}, OnEdge{EdgeId{0}, 1.5});
  EXPECT_NEAR(d.distance, 1.0, 1e-15);
  EXPECT_EQ(d.paths.size(), 1u);
}

TEST(GraphDistance, DisconnectedIsInfiniteWithoutPaths) {
  const GraphDistance d = graph_distance(isolated(3), GraphPoint::vertex(1), GraphPoint::vertex(2));
  EXPECT_TRUE(std::isinf(d.distance));
  EXPECT_TRUE(d.paths.empty());
}

TEST(GraphDistance, CycleTakesShortArc) {
  const GraphDistance d = graph_distance(two_edge_cycle(3.0, 4.0), GraphPoint::vertex(1), GraphPoint::vertex(2));
  EXPECT_NEAR(d.distance, 3.0, 1e-15);
  EXPECT_EQ(d.paths.size(), 1u);
}

TEST(GraphDistance, EqualArcsReportBothPaths) {
  const GraphDistance d = graph_distance(two_edge_cycle(3.5, 3.5), GraphPoint::vertex(1), GraphPoint::vertex(2));
  EXPECT_NEAR(d.distance, 3.5, 1e-15);
  ASSERT_EQ(d.paths.size(), 2u);
  EXPECT_LT(d.paths[0].departure, d.paths[1].departure);
}

TEST(GraphDistance, AgreesWithFloydWarshallOnRandomPoints) {
  const MetricGraph graphs[] = {gallery::theta_graph(3.5, 4.0, 5.0), two_edge_cycle(3.0, 4.0), isolated(3),
                                MetricGraph({VertexId{0}, VertexId{1}, VertexId{2}, VertexId{3}},
                                            {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, 1.0},
                                             Edge{EdgeId{1}, VertexId{1}, VertexId{2}, 2.0},
                                             Edge{EdgeId{2}, VertexId{1}, VertexId{3}, 0.5}})};
  Rng rng(11);
  for (const MetricGraph& g : graphs) {
    for (int n = 0; n < 300; ++n) {
      const GraphPoint a = random_link_point(g, rng);
      const GraphPoint b = random_link_point(g, rng);
      const double expected = oracle::graph_distance(g, a, b);
      const double got = graph_distance(g, a, b).distance;
      if (std::isinf(expected)) {
        EXPECT_TRUE(std::isinf(got));
      } else {
        EXPECT_NEAR(got, expected, 1e-12) << to_string(a) << " " << to_string(b);
      }
    }
  }
}

TEST(GraphDistance, SymmetricAndTriangle) {
  const MetricGraph g = gallery::theta_graph(3.5, 4.0, 5.0);
  Rng rng(3);
  for (int n = 0; n < 300; ++n) {
    const GraphPoint a = random_link_point(g, rng);
    const GraphPoint b = random_link_point(g, rng);
    const GraphPoint c = random_link_point(g, rng);
    const double ab = graph_distance(g, a, b).distance;
    EXPECT_NEAR(ab, graph_distance(g, b, a).distance, 1e-12);
    EXPECT_LE(graph_distance(g, a, c).distance, ab + graph_distance(g, b, c).distance + 1e-12);
  }
}

TEST(AngularDistance, CapsAtPi) {
  EXPECT_NEAR(angular_distance(single_edge(2.0), OnEdge{EdgeId{0}, 0.5}, OnEdge{EdgeId{0}, 1.5}), 1.0, 1e-15);
  EXPECT_EQ(angular_distance(isolated(3), GraphPoint::vertex(1), GraphPoint::vertex(2)), kPi);
  EXPECT_EQ(angular_distance(two_edge_cycle(3.5, 3.5), GraphPoint::vertex(1), GraphPoint::vertex(2)), kPi);
}

TEST(ValidateCat1, CycleLengths) {
  EXPECT_TRUE(validate_cat1(two_edge_cycle(3.0, 4.0)).ok);
  const Cat1Report bad = validate_cat1(two_edge_cycle(2.5, 2.5));
  EXPECT_FALSE(bad.ok);
  EXPECT_NEAR(bad.violating_length, 5.0, 1e-12);
  EXPECT_EQ(bad.violating_cycle.size(), 2u);
  EXPECT_TRUE(validate_cat1(isolated(4)).ok);
  EXPECT_TRUE(validate_cat1(single_edge(10.0)).ok);
}

TEST(ValidateCat1, ExactlyTwoPiIsAllowed) {
  EXPECT_TRUE(validate_cat1(two_edge_cycle(kPi, kPi)).ok);
}

TEST(ValidateCat1, ShortestOfSeveralCyclesIsReported) {
  const Cat1Report r = validate_cat1(gallery::theta_graph(2.0, 3.0, 5.0));
  EXPECT_FALSE(r.ok);
  EXPECT_NEAR(r.violating_length, 5.0, 1e-12);
}

TEST(MetricGraph, RejectsSelfLoopsAndBadIds) {
  EXPECT_THROW(MetricGraph({VertexId{0}}, {Edge{EdgeId{0}, VertexId{0}, VertexId{0}, 7.0}}), ValidationError);
  EXPECT_THROW(MetricGraph({VertexId{0}}, {Edge{EdgeId{0}, VertexId{0}, VertexId{5}, 1.0}}), ValidationError);
  EXPECT_THROW(MetricGraph({VertexId{0}, VertexId{1}}, {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, -1.0}}),
               ValidationError);
  EXPECT_THROW(MetricGraph({VertexId{0}, VertexId{0}}, {}), ValidationError);
}

TEST(MetricGraph, PointOnEdgeSnapsToVertices) {
  const MetricGraph g = single_edge(2.0);
  EXPECT_EQ(g.point_on_edge(EdgeId{0}, 0.0), GraphPoint::vertex(0));
  EXPECT_EQ(g.point_on_edge(EdgeId{0}, 2.0), GraphPoint::vertex(1));
  EXPECT_EQ(g.point_on_edge(EdgeId{0}, 1.0), GraphPoint(OnEdge{EdgeId{0}, 1.0}));
  EXPECT_THROW(g.point_on_edge(EdgeId{0}, 2.5), InvalidPointError);
}

TEST(LinkConvexClosure, TwoPointsOnOneEdge) {
  const MetricGraph g = single_edge(2.0);
  const std::vector<GraphPoint> pts = {OnEdge{EdgeId{0}, 0.5}, OnEdge{EdgeId{0}, 1.5}};
  const SubgraphRegion r = link_convex_closure(g, pts);
  ASSERT_EQ(r.intervals().size(), 1u);
  ASSERT_EQ(r.intervals()[0].second.size(), 1u);
  EXPECT_NEAR(r.intervals()[0].second[0].lo, 0.5, 1e-15);
  EXPECT_NEAR(r.intervals()[0].second[0].hi, 1.5, 1e-15);
  EXPECT_TRUE(r.vertices().empty());
}

TEST(LinkConvexClosure, IsolatedVerticesStayApart) {
  const MetricGraph g = isolated(3);
  const std::vector<GraphPoint> pts = {GraphPoint::vertex(1), GraphPoint::vertex(2)};
  const SubgraphRegion r = link_convex_closure(g, pts);
  EXPECT_EQ(r.vertices().size(), 2u);
  EXPECT_TRUE(r.intervals().empty());
  EXPECT_FALSE(r.contains(g, GraphPoint::vertex(3)));
}

TEST(LinkConvexClosure, CycleKeepsOnlyTheShortArc) {
  // Cycle of length 7 with the points at arc distance 3.
  const MetricGraph g = two_edge_cycle(3.0, 4.0);
  const std::vector<GraphPoint> pts = {GraphPoint::vertex(1), GraphPoint::vertex(2)};
  const SubgraphRegion r = link_convex_closure(g, pts);
  EXPECT_TRUE(r.whole_edge(g, EdgeId{0}));
  EXPECT_FALSE(r.contains(g, OnEdge{EdgeId{1}, 2.0}));
}

TEST(LinkConvexClosure, ThreeSpreadPointsCloseTheWholeKaleCycle) {
  const ConeSpace X = gallery::kale(7.0);
  const std::vector<GraphPoint> pts = {gallery::kale_point(7, 0), gallery::kale_point(7, 7.0 / 3),
                                       gallery::kale_point(7, 14.0 / 3)};
  const SubgraphRegion r = link_convex_closure(X.link(), pts);
  EXPECT_TRUE(r.whole_edge(X.link(), EdgeId{0}));
  EXPECT_TRUE(r.whole_edge(X.link(), EdgeId{1}));
}

TEST(LinkConvexClosure, IdempotentAndExtensive) {
  const MetricGraph g = gallery::theta_graph(3.5, 4.0, 5.0);
  Rng rng(5);
  for (int n = 0; n < 60; ++n) {
    std::vector<GraphPoint> pts;
    for (int i = 0; i < 1 + n % 3; ++i) pts.push_back(random_link_point(g, rng));
    const SubgraphRegion r = link_convex_closure(g, pts);
    EXPECT_EQ(link_convex_closure(g, r), r);
    for (const GraphPoint& p : pts) EXPECT_TRUE(r.contains(g, p));
  }
}

TEST(LinkConvexClosure, ContainsShortGeodesicsBetweenItsPoints) {
  const MetricGraph g = gallery::theta_graph(3.5, 4.0, 5.0);
  Rng rng(6);
  for (int n = 0; n < 40; ++n) {
    const std::vector<GraphPoint> pts = {random_link_point(g, rng), random_link_point(g, rng)};
    const SubgraphRegion r = link_convex_closure(g, pts);
    const GraphDistance d = graph_distance(g, pts[0], pts[1]);
    if (!(d.distance < kPi - 1e-9) || d.paths.size() != 1) continue;
    for (double f : {0.25, 0.5, 0.75}) EXPECT_TRUE(r.contains(g, g.walk(pts[0], pts[1], f * d.distance)));
  }
}

}  // namespace
}  // namespace strata
