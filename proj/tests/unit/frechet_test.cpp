#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "strata/errors.hpp"
#include "strata/frechet.hpp"
#include "strata/gallery.hpp"
#include "strata/sampling.hpp"

namespace strata {
namespace {

Point ray(int v, double r, std::vector<double> u = {}) { return make_point(std::move(u), GraphPoint::vertex(v), r); }

DiscreteMeasure tripod() { return DiscreteMeasure({{ray(1, 1), 0.5}, {ray(2, 1), 0.5}}); }

DiscreteMeasure sticky_book() { return DiscreteMeasure({{ray(1, 1, {-1.0}), 0.5}, {ray(2, 1, {1.0}), 0.5}}); }

DiscreteMeasure kale_three() {
  std::vector<Atom> atoms;
  for (double a : {0.0, 7.0 / 3, 14.0 / 3}) atoms.push_back({make_point({}, gallery::kale_point(7, a), 1.0), 1.0 / 3});
  return DiscreteMeasure(atoms);
}

TEST(DiscreteMeasure, RejectsBadWeights) {
  EXPECT_THROW(DiscreteMeasure({{ray(1, 1), 0.5}, {ray(2, 1), 0.4}}), ValidationError);
  EXPECT_THROW(DiscreteMeasure({{ray(1, 1), 1.5}, {ray(2, 1), -0.5}}), ValidationError);
  EXPECT_THROW(DiscreteMeasure(std::vector<Atom>{}), ValidationError);
  EXPECT_THROW(tripod().check(gallery::spider(1)), InvalidPointError);
}

TEST(FrechetValue, Examples) {
  const ConeSpace X = gallery::spider(3);
  EXPECT_EQ(frechet_value(X, DiscreteMeasure::dirac(ray(1, 1)), ray(1, 1)), 0.0);
  EXPECT_NEAR(frechet_value(X, tripod(), X.apex()), 0.5, 1e-15);
  EXPECT_NEAR(frechet_value(X, tripod(), ray(1, 1)), 1.0, 1e-15);
  EXPECT_NEAR(half_square_distance(X, ray(1, 1), ray(2, 1)), 2.0, 1e-15);
}

TEST(FrechetMean, TripodIsTheApex) {
  const MeanReport m = frechet_mean(gallery::spider(3), tripod());
  EXPECT_TRUE(m.mean.on_spine());
  EXPECT_NEAR(m.value, 0.5, 1e-15);
  EXPECT_TRUE(m.punctual);
  EXPECT_TRUE(m.retractable);
}

TEST(FrechetMean, EuclideanAverage) {
  const DiscreteMeasure mu({{make_point({0, 0}), 0.5}, {make_point({2, 2}), 0.5}});
  const MeanReport m = frechet_mean(gallery::euclidean(2), mu);
  EXPECT_NEAR(m.mean.u[0], 1.0, 1e-15);
  EXPECT_NEAR(m.mean.u[1], 1.0, 1e-15);
}

TEST(FrechetMean, PagePairMeanIsOnTheSpine) {
  const MeanReport m = frechet_mean(gallery::open_book(3, 1), sticky_book());
  EXPECT_TRUE(m.mean.on_spine());
  EXPECT_NEAR(m.mean.u[0], 0.0, 1e-15);
}

TEST(FrechetMean, KaleSymmetricAtomsStickToTheApex) {
  const MeanReport m = frechet_mean(gallery::kale(7.0), kale_three());
  EXPECT_TRUE(m.mean.on_spine());
  EXPECT_GT(m.min_directional_derivative, 0.0);
}

TEST(FrechetMean, SingleAtomIsItsOwnMean) {
  const ConeSpace X = gallery::kale(7.0);
  const Point p = make_point({}, gallery::kale_point(7, 2.0), 1.5);
  EXPECT_LE(distance(X, frechet_mean(X, DiscreteMeasure::dirac(p)).mean, p), 1e-12);
}

TEST(FrechetMean, AgreesWithGridOracle) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0), 1);
  Rng rng(21);
  for (int n = 0; n < 6; ++n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back({random_vector(X, rng), 1.0 / 3});
    const DiscreteMeasure mu(atoms);
    const Point exact = frechet_mean(X, mu).mean;
    const Point grid = frechet_mean_oracle(X, mu, 1e-2);
    EXPECT_LE(frechet_value(X, mu, exact), frechet_value(X, mu, grid) + 1e-12);
    EXPECT_LE(distance(X, exact, grid), 5e-2);
  }
}

TEST(FrechetMean, BeatsRandomCompetitors) {
  const ConeSpace X = gallery::kale(7.0);
  Rng rng(22);
  for (int n = 0; n < 20; ++n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 4; ++i) atoms.push_back({random_vector(X, rng), 0.25});
    const DiscreteMeasure mu(atoms);
    const double best = frechet_value(X, mu, frechet_mean(X, mu).mean);
    for (int k = 0; k < 100; ++k) EXPECT_LE(best, frechet_value(X, mu, random_vector(X, rng)) + 1e-12);
  }
}

TEST(DirectionalDerivative, TripodExamples) {
  const ConeSpace X = gallery::spider(3);
  EXPECT_NEAR(directional_derivative(X, tripod(), X.apex(), ray(1, 1)), 0.0, 1e-12);
  EXPECT_NEAR(directional_derivative(X, tripod(), X.apex(), ray(2, 1)), 0.0, 1e-12);
  EXPECT_NEAR(directional_derivative(X, tripod(), X.apex(), ray(3, 1)), 1.0, 1e-12);
  EXPECT_EQ(directional_derivative(X, tripod(), X.apex(), X.apex()), 0.0);
}

TEST(DirectionalDerivative, KaleClosedForm) {
  // At the atom directions: -(1 + 2 cos(7/3)) / 3. Halfway between two atoms
  // the third is past pi: -(2 cos(7/6) - 1) / 3.
  const ConeSpace X = gallery::kale(7.0);
  const auto grad = [&](double a) {
    return directional_derivative(X, kale_three(), X.apex(), make_point({}, gallery::kale_point(7, a), 1.0));
  };
  EXPECT_NEAR(grad(0.0), -(1 + 2 * std::cos(7.0 / 3)) / 3, 1e-12);
  EXPECT_NEAR(grad(0.0), 0.127172, 1e-6);
  EXPECT_NEAR(grad(7.0 / 6), -(2 * std::cos(7.0 / 6) - 1) / 3, 1e-12);
  double lo = 1e9;
  for (int i = 0; i < 7000; ++i) lo = std::min(lo, grad(i * 1e-3));
  EXPECT_NEAR(lo, 0.0711875, 1e-6);
}

TEST(DirectionalDerivative, MatchesOneSidedDifferenceQuotient) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0), 1);
  Rng rng(23);
  int checked = 0;
  for (int n = 0; n < 200; ++n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back({random_vector(X, rng), 1.0 / 3});
    const DiscreteMeasure mu(atoms);
    const Point p = random_vector(X, rng);
    const TangentVector V = random_unit_vector(tangent_cone(X, p), rng);
    try {
      const double exact = directional_derivative(X, mu, p, V);
      const double fd = oracle::richardson([&](double t) { return frechet_value(X, mu, shoot(X, p, V, t)); });
      EXPECT_NEAR(exact, fd, 1e-4);
      ++checked;
    } catch (const CutLocusError&) {
    } catch (const StepTooLargeError&) {
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Pushforward, ApexIsIdentityAndSpineIsRecentred) {
  const ConeSpace sp = gallery::spider(3);
  const auto [T, nu] = pushforward_to_tangent(sp, tripod(), sp.apex());
  EXPECT_EQ(nu[0].point, ray(1, 1));
  EXPECT_EQ(nu[1].point, ray(2, 1));
  const ConeSpace ob = gallery::open_book(3, 1);
  const DiscreteMeasure shifted({{ray(1, 1, {1.0}), 0.5}, {ray(2, 1, {3.0}), 0.5}});
  const auto [Tb, nub] = pushforward_to_tangent(ob, shifted, make_point({2.0}));
  EXPECT_NEAR(nub[0].point.u[0], -1.0, 1e-15);
  EXPECT_NEAR(nub[1].point.u[0], 1.0, 1e-15);
  EXPECT_TRUE(frechet_mean(Tb, nub).mean.on_spine());
  EXPECT_NEAR(frechet_mean(Tb, nub).mean.u[0], 0.0, 1e-15);
}

TEST(Localization, TiedAtomIsNotRetractable) {
  // Mean at a vertex of an unchecked cycle of length 3 has an atom at the
  // opposite vertex reachable along both edges.
  const ConeSpace X = ConeSpace::unchecked(
      0, MetricGraph({VertexId{0}, VertexId{1}},
                     {Edge{EdgeId{0}, VertexId{0}, VertexId{1}, 1.5}, Edge{EdgeId{1}, VertexId{1}, VertexId{0}, 1.5}}));
  const Point p = ray(0, 1);
  EXPECT_THROW(directional_derivative(X, DiscreteMeasure::dirac(ray(1, 1)), p, make_point({1.0})), CutLocusError);
  const LocalizationReport ok = check_localized(gallery::spider(3), tripod());
  EXPECT_TRUE(ok.punctual && ok.retractable);
  EXPECT_TRUE(ok.ambiguous_atoms.empty());
}

TEST(LinkSupport, MaximumMatchesGrid) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(3.5, 4.0, 5.0));
  Rng rng(24);
  for (int n = 0; n < 30; ++n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 3; ++i) atoms.push_back({random_vector(X, rng, 1.0), 1.0 / 3});
    const DiscreteMeasure mu(atoms);
    const auto best = maximize_link_support(X, mu);
    ASSERT_TRUE(best);
    const double grid =
        oracle::grid_max_over_link(X.link(), [&](const GraphPoint& g) { return link_support_function(X, mu, g); }, 1e-3);
    EXPECT_GE(best->value, grid - 1e-12);
    EXPECT_LE(best->value - grid, 1e-5);
  }
  EXPECT_FALSE(maximize_link_support(gallery::euclidean(2), DiscreteMeasure::dirac(make_point({1, 0}))));
}

TEST(DirectionSample, UnitAndCoversStrata) {
  const ConeSpace T = gallery::open_book(3, 2);
  const auto dirs = direction_sample(T);
  bool spine = false;
  bool rays = false;
  for (const TangentVector& V : dirs) {
    EXPECT_NEAR(norm(V), 1.0, 1e-12);
    spine |= V.on_spine();
    rays |= static_cast<bool>(V.cone);
  }
  EXPECT_TRUE(spine);
  EXPECT_TRUE(rays);
}

}  // namespace
}  // namespace strata
