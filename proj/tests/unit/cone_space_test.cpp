#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "strata/cone_space.hpp"
#include "strata/errors.hpp"
#include "strata/gallery.hpp"
#include "strata/sampling.hpp"

namespace strata {
namespace {

Point ray(int v, double r, std::vector<double> u = {}) { return make_point(std::move(u), GraphPoint::vertex(v), r); }

Point kale_at(double a, double r) { return make_point({}, gallery::kale_point(7.0, a), r); }

TEST(Gallery, Shapes) {
  const ConeSpace sp = gallery::spider(3);
  EXPECT_EQ(sp.spine_dim(), 0);
  EXPECT_EQ(sp.link().vertices().size(), 3u);
  EXPECT_FALSE(sp.link().has_edges());
  const ConeSpace ob = gallery::open_book(3, 1);
  EXPECT_EQ(ob.spine_dim(), 1);
  EXPECT_EQ(ob.link().vertices().size(), 3u);
  EXPECT_EQ(ob.dim(), 2);
  EXPECT_THROW(gallery::kale(5.0), ValidationError);
  EXPECT_EQ(gallery::kale(7.0).dim(), 2);
}

TEST(Distance, SpiderRaysMeetThroughTheApex) {
  EXPECT_NEAR(distance(gallery::spider(3), ray(1, 1), ray(2, 1)), 2.0, 1e-15);
}

TEST(Distance, KaleConicalFormula) {
  EXPECT_NEAR(distance(gallery::kale(7.0), kale_at(0, 1), kale_at(1, 1)), std::sqrt(2 - 2 * std::cos(1.0)), 1e-15);
  EXPECT_NEAR(std::sqrt(2 - 2 * std::cos(1.0)), 0.95885, 1e-5);
}

TEST(Distance, OpenBookPythagoras) {
  const ConeSpace X = gallery::open_book(3, 1);
  EXPECT_NEAR(distance(X, make_point({0.0}), ray(2, 4, {3.0})), 5.0, 1e-15);
}

TEST(Distance, AgreesWithLawOfCosinesOracle) {
  const ConeSpace spaces[] = {gallery::kale(7.0), gallery::open_book(3, 2),
                              gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0), 1)};
  Rng rng(2);
  for (const ConeSpace& X : spaces) {
    for (int n = 0; n < 300; ++n) {
      const Point p = random_vector(X, rng);
      const Point q = random_vector(X, rng);
      EXPECT_NEAR(distance(X, p, q), oracle::space_distance(X.link(), p, q), 1e-12);
    }
  }
}

TEST(Distance, MetricAxioms) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0), 1);
  Rng rng(4);
  for (int n = 0; n < 500; ++n) {
    const Point p = random_vector(X, rng);
    const Point q = random_vector(X, rng);
    const Point z = random_vector(X, rng);
    EXPECT_EQ(distance(X, p, p), 0.0);
    EXPECT_NEAR(distance(X, p, q), distance(X, q, p), 1e-12);
    EXPECT_LE(distance(X, p, z), distance(X, p, q) + distance(X, q, z) + 1e-9);
  }
}

TEST(GeodesicPoint, SpiderMidpointIsApex) {
  const ConeSpace X = gallery::spider(3);
  const Point m = geodesic_point(X, ray(1, 1), ray(2, 1), 0.5);
  EXPECT_TRUE(m.on_spine());
}

TEST(GeodesicPoint, EuclideanIsLinear) {
  const ConeSpace X = gallery::euclidean(2);
  const Point m = geodesic_point(X, make_point({0, 0}), make_point({2, 4}), 0.25);
  EXPECT_NEAR(m.u[0], 0.5, 1e-15);
  EXPECT_NEAR(m.u[1], 1.0, 1e-15);
}

TEST(GeodesicPoint, KaleByPlanarDevelopment) {
  // Unit points at link angle 2 develop to (1, 0) and (cos 2, sin 2); the
  // chord midpoint has radius cos 1 and angle 1.
  const ConeSpace X = gallery::kale(7.0);
  const Point m = geodesic_point(X, kale_at(0, 1), kale_at(2, 1), 0.5);
  ASSERT_TRUE(m.cone);
  EXPECT_NEAR(m.cone->r, std::cos(1.0), 1e-15);
  EXPECT_NEAR(graph_distance(X.link(), gallery::kale_point(7, 0), m.cone->g).distance, 1.0, 1e-14);
}

TEST(GeodesicPoint, CatZeroMidpointInequality) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0), 1);
  Rng rng(8);
  for (int n = 0; n < 500; ++n) {
    const Point x = random_vector(X, rng);
    const Point y = random_vector(X, rng);
    const Point z = random_vector(X, rng);
    const Point m = geodesic_point(X, x, y, 0.5);
    const double lhs = std::pow(distance(X, m, z), 2);
    const double rhs = 0.5 * std::pow(distance(X, x, z), 2) + 0.5 * std::pow(distance(X, y, z), 2) -
                       0.25 * std::pow(distance(X, x, y), 2);
    EXPECT_LE(lhs, rhs + 1e-9);
    EXPECT_NEAR(distance(X, x, m), 0.5 * distance(X, x, y), 1e-9);
  }
}

TEST(LogMap, AtApexIsTheConicalIdentification) {
  const ConeSpace X = gallery::open_book(3, 1);
  const Point x = ray(2, 1.5, {0.3});
  EXPECT_EQ(log_map(X, X.apex(), x), x);
}

TEST(LogMap, SpiderAntipodalPointsAimAtTheApex) {
  const ConeSpace X = gallery::spider(3);
  const TangentVector V = log_map(X, ray(1, 1), ray(2, 1));
  ASSERT_EQ(V.u.size(), 1u);
  EXPECT_NEAR(V.u[0], -2.0, 1e-15);
  EXPECT_FALSE(V.cone);
}

TEST(LogMap, KaleIsoscelesTriangle) {
  const ConeSpace X = gallery::kale(7.0);
  const Point p = kale_at(0, 1);
  const ConeSpace T = tangent_cone(X, p);
  const TangentVector V = log_map(X, p, kale_at(1, 1));
  EXPECT_NEAR(norm(V), std::sqrt(2 - 2 * std::cos(1.0)), 1e-15);
  const TangentVector outward = make_point({1.0});
  EXPECT_NEAR(angle(T, outward, V), (kPi + 1.0) / 2.0, 1e-12);
}

TEST(LogMap, ShootRoundTrip) {
  const ConeSpace X = gallery::kale(7.0);
  Rng rng(9);
  int checked = 0;
  for (int n = 0; n < 400; ++n) {
    const Point p = random_vector(X, rng);
    const Point x = random_vector(X, rng);
    try {
      EXPECT_LE(distance(X, shoot(X, p, log_map(X, p, x), 1.0), x), 1e-9);
      ++checked;
    } catch (const StepTooLargeError&) {
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(LogMap, TiedPathsRaiseCutLocus) {
  // Cycle of length 3 is not CAT(1); only reachable through unchecked().
  const ConeSpace X = ConeSpace::unchecked(
      0, MetricGraph({VertexId{0}, VertexId{1}},
                     {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, 1.5}, Edge{EdgeId{1}, VertexId{1}, VertexId{0}, 1.5}}));
  EXPECT_THROW(log_map(X, ray(0, 1), ray(1, 1)), CutLocusError);
  EXPECT_THROW(geodesic_point(X, ray(0, 1), ray(1, 1), 0.5), AmbiguousGeodesicError);
}

TEST(Shoot, ApexAndZeroStep) {
  const ConeSpace X = gallery::kale(7.0);
  const TangentVector V = kale_at(1, 2);
  const Point q = shoot(X, X.apex(), V, 0.5);
  ASSERT_TRUE(q.cone);
  EXPECT_NEAR(q.cone->r, 1.0, 1e-15);
  const Point p = kale_at(3, 1);
  EXPECT_EQ(shoot(X, p, log_map(X, p, kale_at(1, 1)), 0.0), p);
}

TEST(Angle, Examples) {
  const ConeSpace sp = gallery::spider(3);
  EXPECT_EQ(angle(sp, ray(1, 1), ray(1, 1)), 0.0);
  EXPECT_NEAR(inner_product(sp, ray(1, 2), ray(1, 2)), 4.0, 1e-15);
  EXPECT_NEAR(angle(sp, ray(1, 1), ray(2, 1)), kPi, 1e-15);
  EXPECT_NEAR(inner_product(sp, ray(1, 1), ray(2, 1)), -1.0, 1e-15);
  const ConeSpace ob = gallery::open_book(3, 1);
  EXPECT_NEAR(angle(ob, make_point({1.0}), ray(1, 1, {0.0})), kPi / 2, 1e-15);
  EXPECT_NEAR(inner_product(ob, make_point({1.0}), ray(1, 1, {0.0})), 0.0, 1e-15);
  EXPECT_EQ(angle(ob, ob.apex(), ray(1, 1, {0.0})), 0.0);
}

TEST(Angle, AccurateNearPi) {
  const ConeSpace X = gallery::kale(7.0);
  const double th = kPi - 1e-7;
  EXPECT_NEAR(angle(X, kale_at(0, 1), kale_at(th, 1)), th, 1e-15);
  EXPECT_NEAR(angle(X, kale_at(0, 1), kale_at(1e-9, 3)), 1e-9, 1e-20);
}

TEST(Angle, FlatApexTriangles) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0), 1);
  Rng rng(12);
  for (int n = 0; n < 300; ++n) {
    const TangentVector V = random_unit_vector(X, rng);
    const TangentVector W = random_unit_vector(X, rng);
    const double t = rng.uniform(0, 2);
    const double s = rng.uniform(0, 2);
    const double d = distance(X, scale(V, t), scale(W, s));
    EXPECT_NEAR(d * d, t * t + s * s - 2 * t * s * std::cos(angle(X, V, W)), 1e-9);
  }
}

TEST(Stratum, CodimensionExamples) {
  const ConeSpace sp = gallery::spider(3);
  EXPECT_EQ(stratum_of(sp, sp.apex()).kind, StratumKind::kSpine);
  EXPECT_EQ(codim(sp, sp.apex()), 1);
  const ConeSpace k = gallery::kale(7.0);
  EXPECT_EQ(stratum_of(k, kale_at(1, 1)).kind, StratumKind::kSector);
  EXPECT_EQ(codim(k, kale_at(1, 1)), 0);
  const ConeSpace ob = gallery::open_book(3, 1);
  EXPECT_EQ(stratum_of(ob, make_point({2.0})).kind, StratumKind::kSpine);
  // Pages are 2-dimensional and the spine is 1-dimensional.
  EXPECT_EQ(codim(ob, make_point({2.0})), 1);
  EXPECT_EQ(codim(ob, ray(1, 1, {0.0})), 0);
}

TEST(TangentCone, Shapes) {
  const ConeSpace theta = gallery::cone_over(gallery::theta_graph(kPi, kPi, kPi));
  const ConeSpace Tv = tangent_cone(theta, ray(0, 1));
  EXPECT_EQ(Tv.spine_dim(), 1);
  EXPECT_EQ(Tv.link().vertices().size(), 3u);
  const ConeSpace Te = tangent_cone(theta, make_point({}, OnEdge{EdgeId{0}, 1.0}, 1.0));
  EXPECT_EQ(Te.spine_dim(), 2);
  EXPECT_TRUE(Te.link().empty());
}

TEST(CheckPoint, RejectsMalformedPoints) {
  const ConeSpace X = gallery::open_book(3, 1);
  EXPECT_THROW(X.check_point(make_point({})), InvalidPointError);
  EXPECT_THROW(X.check_point(make_point({0.0}, GraphPoint::vertex(9), 1.0)), InvalidPointError);
  EXPECT_THROW(X.check_point(make_point({0.0}, GraphPoint::vertex(1), -1.0)), InvalidPointError);
}

}  // namespace
}  // namespace strata
