#include <gtest/gtest.h>

#include <cmath>

#include "strata/devissage.hpp"
#include "strata/errors.hpp"
#include "strata/gallery.hpp"

namespace strata {
namespace {

Point ray(int v, double r, std::vector<double> u = {}) { return make_point(std::move(u), GraphPoint::vertex(v), r); }

DiscreteMeasure tripod() { return DiscreteMeasure({{ray(1, 1), 0.5}, {ray(2, 1), 0.5}}); }

DiscreteMeasure sticky_book() {
  return DiscreteMeasure(
      {{ray(1, 1, {-1.0}), 1.0 / 3}, {ray(2, 1, {0.0}), 1.0 / 3}, {ray(3, 1, {1.0}), 1.0 / 3}});
}

DiscreteMeasure page_pair() { return DiscreteMeasure({{ray(1, 1, {-1.0}), 0.5}, {ray(2, 1, {1.0}), 0.5}}); }

DiscreteMeasure kale_three() {
  std::vector<Atom> atoms;
  for (double a : {0.0, 7.0 / 3, 14.0 / 3}) atoms.push_back({make_point({}, gallery::kale_point(7, a), 1.0), 1.0 / 3});
  return DiscreteMeasure(atoms);
}

TEST(InitialRavel, Examples) {
  const Ravel tri = initial_ravel(gallery::spider(3), tripod());
  EXPECT_FALSE(is_resolved(tri));
  EXPECT_EQ(tri.resolving.direction, ray(1, 1));
  const Ravel sticky = initial_ravel(gallery::open_book(3, 1), sticky_book());
  EXPECT_TRUE(is_resolved(sticky));
  EXPECT_EQ(sticky.resolving.stratum.kind, StratumKind::kSpine);
  const Ravel dirac = initial_ravel(gallery::spider(3), DiscreteMeasure::dirac(ray(1, 2)));
  EXPECT_TRUE(is_resolved(dirac));
}

TEST(DevissageStep, TripodLandsOnTheLine) {
  const auto [next, stage] = devissage_step(initial_ravel(gallery::spider(3), tripod()));
  EXPECT_FALSE(stage.identity);
  EXPECT_EQ(next.space.spine_dim(), 1);
  EXPECT_TRUE(next.space.link().empty());
  EXPECT_NEAR(next.measure[0].point.u[0], 1.0, 1e-15);
  EXPECT_NEAR(next.measure[1].point.u[0], -1.0, 1e-15);
  EXPECT_TRUE(is_resolved(next));
}

TEST(DevissageStep, StickyIsIdentity) {
  const Ravel r = initial_ravel(gallery::open_book(3, 1), sticky_book());
  const auto [next, stage] = devissage_step(r);
  EXPECT_TRUE(stage.identity);
  EXPECT_EQ(next.measure[0].point, r.measure[0].point);
}

TEST(DevissageStep, ThetaVertexDropsOneCodimension) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(kPi, kPi, kPi));
  const DiscreteMeasure mu({{ray(0, 1), 0.5}, {ray(1, 1), 0.5}});
  const DevissageTrace t = run_devissage(X, mu);
  ASSERT_GE(t.codims.size(), 2u);
  EXPECT_EQ(t.codims[0], 2);
  EXPECT_EQ(t.codims[1], 1);
  EXPECT_EQ(t.ravels[1].space.spine_dim(), 1);
  EXPECT_EQ(t.ravels[1].space.link().vertices().size(), 3u);
}

TEST(RunDevissage, TerminalData) {
  const DevissageTrace tri = run_devissage(gallery::spider(3), tripod());
  EXPECT_EQ(tri.m, 1);
  EXPECT_EQ(tri.k, 0);
  const DevissageTrace sticky = run_devissage(gallery::open_book(3, 1), sticky_book());
  EXPECT_EQ(sticky.m, 1);
  const DiscreteMeasure euc({{make_point({1, 0}), 0.5}, {make_point({-1, 0}), 0.5}});
  const DevissageTrace e = run_devissage(gallery::euclidean(2), euc);
  EXPECT_EQ(e.m, 2);
  const DevissageTrace kale = run_devissage(gallery::kale(7.0), kale_three());
  EXPECT_EQ(kale.m, 0);
  EXPECT_FALSE(kale.k);
}

TEST(RunDevissage, CodimStrictlyDecreasesOnRealStages) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(kPi, kPi, kPi));
  const DevissageTrace t = run_devissage(X, DiscreteMeasure({{ray(0, 1), 0.5}, {ray(1, 1), 0.5}}));
  for (std::size_t i = 0; i < t.stages.size(); ++i) {
    if (!t.stages[i].identity) {
      EXPECT_LT(t.codims[i + 1], t.codims[i]);
    }
  }
  EXPECT_LE(static_cast<int>(t.stages.size()), t.codims.front() + 1);
}

TEST(RunDevissage, PagePairTakesOneRealStage) {
  // Two opposite pages form a flat plane through the spine, so C contains the
  // page rays and the first stage leaves the spine.
  const DevissageTrace t = run_devissage(gallery::open_book(3, 1), page_pair());
  ASSERT_EQ(t.stages.size(), 1u);
  EXPECT_FALSE(t.stages[0].identity);
  EXPECT_EQ(t.m, 2);
}

TEST(TerminalProjection, KeepsSpineCoordinates) {
  const ConeSpace T = gallery::open_book(3, 2);
  EXPECT_EQ(terminal_projection(T, ray(1, 4, {1.0, -2.0})), (std::vector<double>{1.0, -2.0}));
  EXPECT_EQ(terminal_projection(T, make_point({3.0, 4.0})), (std::vector<double>{3.0, 4.0}));
}

TEST(Collapse, TripodSendsRaysToSigns) {
  const CollapseMap L = collapse(gallery::spider(3), tripod());
  EXPECT_EQ(L.m(), 1);
  EXPECT_NEAR(L(ray(1, 1))[0], 1.0, 1e-15);
  EXPECT_NEAR(L(ray(2, 2))[0], -2.0, 1e-15);
  EXPECT_NEAR(L(ray(3, 1))[0], -1.0, 1e-15);
  EXPECT_EQ(L(gallery::spider(3).apex())[0], 0.0);
}

TEST(Collapse, StickyIsSpineProjection) {
  const CollapseMap L = collapse(gallery::open_book(3, 1), sticky_book());
  EXPECT_EQ(L.m(), 1);
  EXPECT_NEAR(L(ray(3, 5, {0.7}))[0], 0.7, 1e-15);
}

TEST(Collapse, HomogeneousAndNormBounded) {
  const ConeSpace X = gallery::cone_over(gallery::theta_graph(kPi, kPi, kPi));
  const CollapseMap L = collapse(X, DiscreteMeasure({{ray(0, 1), 0.5}, {ray(1, 1), 0.5}}));
  const TangentVector V = make_point({}, OnEdge{EdgeId{1}, 1.0}, 1.0);
  const auto a = L(V);
  const auto b = L(scale(V, 3.0));
  ASSERT_EQ(a.size(), b.size());
  double n2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(b[i], 3.0 * a[i], 1e-12);
    n2 += a[i] * a[i];
  }
  EXPECT_LE(std::sqrt(n2), 1.0 + 1e-12);
}

TEST(VerifyCollapse, StickyAllPass) {
  const CollapseVerification v = verify_collapse(collapse(gallery::open_book(3, 1), sticky_book()), 200, 1);
  for (const PropertyCheck& c : v.checks) EXPECT_NE(c.status, CheckStatus::kFail) << c.name << " " << c.detail;
  EXPECT_TRUE(v.all_pass());
}

TEST(VerifyCollapse, KaleIsVacuousWhereTheConeIsZero) {
  const CollapseVerification v = verify_collapse(collapse(gallery::kale(7.0), kale_three()), 200, 1);
  EXPECT_TRUE(v.all_pass());
  bool vacuous = false;
  for (const PropertyCheck& c : v.checks) vacuous |= c.status == CheckStatus::kVacuous;
  EXPECT_TRUE(vacuous);
}

TEST(VerifyCollapse, TripodInjectiveOnTheCone) {
  // Pairings against arbitrary vectors cannot all be kept in R^1 (see the
  // acceptance report); the cone itself is mapped isometrically.
  const CollapseVerification v = verify_collapse(collapse(gallery::spider(3), tripod()), 200, 1);
  for (const PropertyCheck& c : v.checks) {
    if (c.name.find("injective") != std::string::npos) {
      EXPECT_EQ(c.status, CheckStatus::kPass);
    }
  }
}

}  // namespace
}  // namespace strata
