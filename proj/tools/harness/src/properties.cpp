#include "strata/harness/properties.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <thread>

#include "strata/errors.hpp"
#include "strata/sampling.hpp"

namespace strata::harness {
namespace {

constexpr double kAntipodal = kPi - 1e-9;

std::uint64_t mix_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return seed ^ h;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Collects results for one fixture; each check owns its sample loop.
class Recorder {
 public:
  explicit Recorder(FixtureReport& out) : out_(out) {}

  PropertyCheck& begin(std::string module, int criterion, std::string name, std::string detail) {
    module_ = std::move(module);
    criterion_ = criterion;
    current_ = PropertyCheck{std::move(name), CheckStatus::kPass, 0.0, 0, std::move(detail)};
    return current_;
  }

  /// Pass iff worst <= limit and at least `min_samples` were taken; no
  /// samples at all with min_samples == 0 is a vacuous pass.
  void finish(double limit, std::size_t min_samples = 1) {
    PropertyCheck& c = current_;
    if (c.samples == 0 && min_samples == 0) {
      c.status = CheckStatus::kVacuous;
    } else if (c.samples < min_samples) {
      c.status = CheckStatus::kFail;
      c.detail += " [only " + std::to_string(c.samples) + " samples]";
    } else {
      c.status = c.worst <= limit ? CheckStatus::kPass : CheckStatus::kFail;
    }
    out_.results.push_back(PropertyResult{module_, criterion_, c});
  }

  void vacuous(const std::string& why) {
    current_.status = CheckStatus::kVacuous;
    current_.detail += " [" + why + "]";
    out_.results.push_back(PropertyResult{module_, criterion_, current_});
  }

  void fail(const std::string& why) {
    current_.status = CheckStatus::kFail;
    current_.detail += " [" + why + "]";
    out_.results.push_back(PropertyResult{module_, criterion_, current_});
  }

  void add(std::string module, int criterion, PropertyCheck c) {
    out_.results.push_back(PropertyResult{std::move(module), criterion, std::move(c)});
  }

  /// Runs `body`; any exception turns into a failed check.
  void guarded(const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      fail(std::string("exception: ") + e.what());
    }
  }

 private:
  FixtureReport& out_;
  std::string module_;
  int criterion_ = 0;
  PropertyCheck current_;
};

std::optional<GraphPoint> random_region_point(const MetricGraph& G, const SubgraphRegion& R, Rng& rng) {
  std::vector<std::pair<EdgeId, Interval>> ivs;
  for (const auto& [e, list] : R.intervals()) {
    for (const Interval& iv : list) ivs.push_back({e, iv});
  }
  const std::size_t n = R.vertices().size() + ivs.size();
  if (n == 0) return std::nullopt;
  const std::size_t k = rng.index(n);
  if (k < R.vertices().size()) return GraphPoint{OnVertex{R.vertices()[k]}};
  const auto& [e, iv] = ivs[k - R.vertices().size()];
  return G.point_on_edge(e, rng.uniform(iv.lo, iv.hi));
}

std::vector<double> normal_vector(std::size_t n, Rng& rng) {
  std::vector<double> u(n);
  for (double& x : u) x = rng.normal();
  return u;
}

/// Random member of E (unit), or nullopt when E = {0}.
std::optional<TangentVector> random_escape_member(const ConeSpace& T, const EscapeSections& E, Rng& rng) {
  const std::size_t s = static_cast<std::size_t>(T.spine_dim());
  const bool has_link = !E.zero_set.empty();
  if (!E.spine && !has_link) return std::nullopt;
  if (E.spine && (!has_link || rng.uniform() < 0.3)) {
    return normalized(Point{normal_vector(s, rng), {}});
  }
  const auto g = random_region_point(T.link(), E.zero_set, rng);
  std::vector<double> u(s, 0.0);
  if (E.spine) u = normal_vector(s, rng);
  return normalized(Point{std::move(u), ConePart{*g, rng.uniform(0.1, 2.0)}});
}

/// Deterministic representatives of the unit sphere of E.
std::vector<TangentVector> escape_representatives(const ConeSpace& T, const EscapeSections& E) {
  const std::size_t s = static_cast<std::size_t>(T.spine_dim());
  std::vector<TangentVector> reps;
  if (E.spine) {
    for (std::size_t i = 0; i < s; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> u(s, 0.0);
        u[i] = sign;
        reps.push_back(Point{u, {}});
      }
    }
  }
  std::vector<GraphPoint> pts = E.zero_set.extreme_points(T.link());
  for (const auto& [e, list] : E.zero_set.intervals()) {
    for (const Interval& iv : list) pts.push_back(T.link().point_on_edge(e, 0.5 * (iv.lo + iv.hi)));
  }
  for (const GraphPoint& g : pts) reps.push_back(Point{std::vector<double>(s, 0.0), ConePart{g, 1.0}});
  return reps;
}

/// F along V from p: one-sided difference quotient Richardson-extrapolated
/// from steps 1e-3 and 1e-4. Throws StepTooLargeError when a step leaves the
/// region where shoot is defined.
double richardson_derivative(const ConeSpace& X, const DiscreteMeasure& mu, const Point& p,
                             const TangentVector& V) {
  const double f0 = frechet_value(X, mu, p);
  const auto quotient = [&](double h) { return (frechet_value(X, mu, shoot(X, p, V, h)) - f0) / h; };
  const double d1 = quotient(1e-3);
  const double d2 = quotient(1e-4);
  return (10.0 * d2 - d1) / 9.0;
}

/// Fixture state shared by the checks.
struct Context {
  ConeSpace X;
  DiscreteMeasure mu;
  MeanReport mean;
  Ravel ravel;  // T0, mu-hat, C
  EscapeSections escape;
  ConvexCone hull;
  DevissageTrace trace;
};

// ---- metric-graph ---------------------------------------------------------

void graph_checks(Recorder& rec, const Context& ctx, Rng& rng, const SuiteOptions& opt) {
  const MetricGraph& G = ctx.X.link();
  const bool empty = G.empty();

  rec.begin("metric-graph", 0, "graph_distance_metric", "symmetry and triangle inequality, tol 1e-12");
  if (empty) {
    rec.vacuous("empty link");
  } else {
    rec.guarded([&] {
      PropertyCheck& c = rec.begin("metric-graph", 0, "graph_distance_metric",
                                   "symmetry and triangle inequality, tol 1e-12");
      for (std::size_t n = 0; n < opt.pair_samples; ++n) {
        const GraphPoint a = random_link_point(G, rng);
        const GraphPoint b = random_link_point(G, rng);
        const GraphPoint x = random_link_point(G, rng);
        const double ab = graph_distance(G, a, b).distance;
        const double ba = graph_distance(G, b, a).distance;
        const double bx = graph_distance(G, b, x).distance;
        const double ax = graph_distance(G, a, x).distance;
        if (std::isfinite(ab)) c.worst = std::max(c.worst, std::abs(ab - ba));
        if (std::isfinite(ab) && std::isfinite(bx)) c.worst = std::max(c.worst, ax - ab - bx);
        ++c.samples;
      }
      rec.finish(1e-12);
    });
  }

  rec.begin("metric-graph", 0, "angular_distance_truncation", "angular = min(graph, pi)");
  if (empty) {
    rec.vacuous("empty link");
  } else {
    rec.guarded([&] {
      PropertyCheck& c = rec.begin("metric-graph", 0, "angular_distance_truncation", "angular = min(graph, pi)");
      for (std::size_t n = 0; n < opt.pair_samples; ++n) {
        const GraphPoint a = random_link_point(G, rng);
        const GraphPoint b = random_link_point(G, rng);
        const double d = graph_distance(G, a, b).distance;
        const double th = angular_distance(G, a, b);
        c.worst = std::max(c.worst, std::abs(th - std::min(d, kPi)));
        if (th > kPi) c.worst = std::max(c.worst, th - kPi);
        ++c.samples;
      }
      rec.finish(0.0);
    });
  }

  rec.begin("metric-graph", 0, "closure_idempotent_and_extensive", "closure(closure(S)) = closure(S) and S inside");
  if (empty) {
    rec.vacuous("empty link");
  } else {
    rec.guarded([&] {
      PropertyCheck& c = rec.begin("metric-graph", 0, "closure_idempotent_and_extensive",
                                   "closure(closure(S)) = closure(S) and S inside");
      for (std::size_t n = 0; n < 40; ++n) {
        std::vector<GraphPoint> pts;
        const std::size_t k = 1 + rng.index(3);
        for (std::size_t i = 0; i < k; ++i) pts.push_back(random_link_point(G, rng));
        const SubgraphRegion S = link_convex_closure(G, pts);
        const SubgraphRegion SS = link_convex_closure(G, S);
        ++c.samples;
        if (!(S == SS)) c.worst = std::max(c.worst, 1.0);
        for (const GraphPoint& p : pts) {
          if (!S.contains(G, p)) c.worst = std::max(c.worst, 1.0);
        }
      }
      rec.finish(0.0);
    });
  }
}

// ---- cone-space -----------------------------------------------------------

void cone_space_checks(Recorder& rec, const Context& ctx, Rng& rng, const SuiteOptions& opt) {
  const ConeSpace& X = ctx.X;

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cone-space", 0, "metric_axioms", "symmetry, identity, triangle, tol 1e-9");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const Point p = random_vector(X, rng);
      const Point q = random_vector(X, rng);
      const Point z = random_vector(X, rng);
      const double pq = distance(X, p, q);
      c.worst = std::max(c.worst, std::abs(pq - distance(X, q, p)));
      c.worst = std::max(c.worst, distance(X, p, p));
      c.worst = std::max(c.worst, distance(X, p, z) - pq - distance(X, q, z));
      ++c.samples;
    }
    rec.finish(1e-9);
  });

  rec.guarded([&] {
    PropertyCheck& c =
        rec.begin("cone-space", 0, "flat_apex_triangles", "d(tV, sW)^2 = t^2 + s^2 - 2ts cos angle, tol 1e-9");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const TangentVector V = random_unit_vector(X, rng);
      const TangentVector W = random_unit_vector(X, rng);
      const double t = rng.uniform(0.0, 2.0);
      const double s = rng.uniform(0.0, 2.0);
      const double d = distance(X, scale(V, t), scale(W, s));
      const double planar = t * t + s * s - 2.0 * t * s * std::cos(angle(X, V, W));
      c.worst = std::max(c.worst, std::abs(d * d - planar));
      ++c.samples;
    }
    rec.finish(1e-9);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cone-space", 0, "adjacent_angles",
                                 "angle(log_q p, log_q s) + angle(log_q s, log_q r) >= pi - 1e-9");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const Point p = random_vector(X, rng);
      const Point r = random_vector(X, rng);
      const Point s = random_vector(X, rng);
      try {
        const Point q = geodesic_point(X, p, r, rng.uniform(0.2, 0.8));
        if (distance(X, q, p) < 1e-6 || distance(X, q, r) < 1e-6 || distance(X, q, s) < 1e-6) continue;
        const ConeSpace T = tangent_cone(X, q);
        const TangentVector a = log_map(X, q, p);
        const TangentVector b = log_map(X, q, s);
        const TangentVector e = log_map(X, q, r);
        c.worst = std::max(c.worst, kPi - angle(T, a, b) - angle(T, b, e));
        ++c.samples;
      } catch (const AmbiguousGeodesicError&) {
      } catch (const CutLocusError&) {
      }
    }
    rec.finish(1e-9);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cone-space", 0, "cat0_midpoint",
                                 "d(m,z)^2 <= d(x,z)^2/2 + d(y,z)^2/2 - d(x,y)^2/4 + 1e-9");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const Point x = random_vector(X, rng);
      const Point y = random_vector(X, rng);
      const Point z = random_vector(X, rng);
      try {
        const Point m = geodesic_point(X, x, y, 0.5);
        const double lhs = std::pow(distance(X, m, z), 2);
        const double rhs = 0.5 * std::pow(distance(X, x, z), 2) + 0.5 * std::pow(distance(X, y, z), 2) -
                           0.25 * std::pow(distance(X, x, y), 2);
        c.worst = std::max(c.worst, lhs - rhs);
        ++c.samples;
      } catch (const AmbiguousGeodesicError&) {
      }
    }
    rec.finish(1e-9);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cone-space", 0, "log_shoot_roundtrip", "d(shoot(p, log_p x, 1), x) <= 1e-9");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const Point p = random_vector(X, rng);
      const Point x = random_vector(X, rng);
      try {
        const TangentVector V = log_map(X, p, x);
        c.worst = std::max(c.worst, distance(X, shoot(X, p, V, 1.0), x));
        ++c.samples;
      } catch (const CutLocusError&) {
      } catch (const StepTooLargeError&) {
      }
    }
    rec.finish(1e-9, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cone-space", 0, "first_variation",
                                 "Richardson FD of d(., w)^2/2 vs -<log_q w, V>, tol 1e-5");
    for (std::size_t n = 0; n < 4 * opt.gradient_samples && c.samples < opt.gradient_samples; ++n) {
      const Point q = random_vector(X, rng);
      const Point w = random_vector(X, rng);
      const TangentVector V = random_vector(tangent_cone(X, q), rng);
      const DiscreteMeasure d = DiscreteMeasure::dirac(w);
      try {
        const double exact = directional_derivative(X, d, q, V);
        c.worst = std::max(c.worst, std::abs(exact - richardson_derivative(X, d, q, V)));
        ++c.samples;
      } catch (const CutLocusError&) {
      } catch (const StepTooLargeError&) {
      }
    }
    rec.finish(1e-5, 100);
  });
}

// ---- frechet --------------------------------------------------------------

void frechet_checks(Recorder& rec, const Context& ctx, Rng& rng, const SuiteOptions& opt) {
  const ConeSpace& X = ctx.X;
  const ConeSpace& T = ctx.ravel.space;
  const DiscreteMeasure& nu = ctx.ravel.measure;

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("frechet", 7, "gradient_vs_finite_difference",
                                 "|grad F(V) - Richardson FD (1e-3, 1e-4)| <= 1e-5, >= 100 samples");
    for (std::size_t n = 0; n < 4 * opt.gradient_samples && c.samples < opt.gradient_samples; ++n) {
      const Point p = random_vector(X, rng);
      const TangentVector V = random_vector(tangent_cone(X, p), rng);
      try {
        const double exact = directional_derivative(X, ctx.mu, p, V);
        c.worst = std::max(c.worst, std::abs(exact - richardson_derivative(X, ctx.mu, p, V)));
        ++c.samples;
      } catch (const CutLocusError&) {
      } catch (const StepTooLargeError&) {
      }
    }
    rec.finish(1e-5, 100);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("frechet", 0, "gradient_nonnegative_at_mean", "grad F >= -1e-8 at the mean");
    std::vector<TangentVector> dirs = direction_sample(T);
    for (std::size_t n = 0; n < opt.pair_samples; ++n) dirs.push_back(random_unit_vector(T, rng));
    for (const auto& V : dirs) {
      c.worst = std::max(c.worst, -directional_derivative(X, ctx.mu, ctx.mean.mean, V));
      ++c.samples;
    }
    rec.finish(1e-8);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("frechet", 8, "gradient_midpoint_convexity",
                                 "grad F(mid) <= (grad F(V) + grad F(W)) / 2 + 1e-9, angle < pi");
    const Point O = T.apex();
    for (std::size_t n = 0; n < 3 * opt.convexity_samples && c.samples < opt.convexity_samples; ++n) {
      const TangentVector V = random_vector(T, rng);
      const TangentVector W = random_vector(T, rng);
      if (angle(T, V, W) >= kAntipodal) continue;
      try {
        const TangentVector U = geodesic_point(T, V, W, 0.5);
        const double lhs = directional_derivative(T, nu, O, U);
        const double rhs = 0.5 * (directional_derivative(T, nu, O, V) + directional_derivative(T, nu, O, W));
        c.worst = std::max(c.worst, lhs - rhs);
        ++c.samples;
      } catch (const AmbiguousGeodesicError&) {
      }
    }
    rec.finish(1e-9, 1000);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("frechet", 0, "gradient_equal_for_pushforward",
                                 "|grad F_mu(V) - grad F_muhat(V)| <= 1e-12 at the mean");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const TangentVector V = random_vector(T, rng);
      c.worst = std::max(c.worst, std::abs(directional_derivative(X, ctx.mu, ctx.mean.mean, V) -
                                           directional_derivative(T, nu, T.apex(), V)));
      ++c.samples;
    }
    rec.finish(1e-12);
  });

  if (opt.oracle) {
    rec.guarded([&] {
      PropertyCheck& c =
          rec.begin("frechet", 11, "oracle_agreement", "d(frechet_mean, grid oracle step 1e-3) <= 2e-3");
      const Point oracle = frechet_mean_oracle(X, ctx.mu, opt.oracle_step);
      c.worst = distance(X, ctx.mean.mean, oracle);
      c.samples = 1;
      rec.finish(2.0 * opt.oracle_step);
    });
  }
}

// ---- cones ----------------------------------------------------------------

void cone_checks(Recorder& rec, const Context& ctx, Rng& rng, const SuiteOptions& opt) {
  const ConeSpace& T = ctx.ravel.space;
  const DiscreteMeasure& nu = ctx.ravel.measure;
  const EscapeSections& E = ctx.escape;
  const ConvexCone& C = ctx.ravel.working_cone;

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cones", 0, "escape_scaling", "membership of V and tV agree for t in {0.01, 7}");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      std::optional<TangentVector> V;
      if (n % 2 == 0) V = random_escape_member(T, E, rng);
      if (!V) V = random_vector(T, rng);
      const bool a = escape_membership(T, nu, *V);
      for (double t : {0.01, 7.0}) {
        if (escape_membership(T, nu, scale(*V, t)) != a) c.worst = 1.0;
      }
      ++c.samples;
    }
    rec.finish(0.0);
  });

  rec.guarded([&] {
    PropertyCheck& c =
        rec.begin("cones", 12, "escape_convexity", "midpoint of E members at angle < pi is in E at tol 1e-8");
    for (std::size_t n = 0; n < 3 * opt.convexity_samples && c.samples < opt.convexity_samples; ++n) {
      const auto V = random_escape_member(T, E, rng);
      const auto W = random_escape_member(T, E, rng);
      if (!V || !W) break;
      if (angle(T, *V, *W) >= kAntipodal) continue;
      try {
        const TangentVector M = geodesic_point(T, *V, *W, 0.5);
        if (norm(M) == 0.0) continue;
        const double g = std::abs(directional_derivative(T, nu, T.apex(), normalized(M)));
        c.worst = std::max(c.worst, g);
        ++c.samples;
      } catch (const AmbiguousGeodesicError&) {
      }
    }
    rec.finish(10.0 * kEscapeTol, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cones", 12, "escape_single_link_component",
                                 "the unit sphere of E lies in one link component");
    if (!E.spine && E.zero_set.empty()) {
      rec.vacuous("E = {0}");
      return;
    }
    if (T.spine_dim() > 0) {
      // The unit sphere of E is the spherical join of the spine sphere with
      // the zero set, which is connected.
      c.samples = 1;
      rec.finish(0.0);
      return;
    }
    const std::size_t k = region_components(T.link(), E.zero_set);
    c.samples = 1;
    c.worst = static_cast<double>(k - 1);
    c.detail += " [" + std::to_string(k) + " components]";
    rec.finish(0.0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cones", 12, "antipodal_identity",
                                 "V, W in E at angle pi: angle(X,V) + angle(X,W) = pi +- 1e-8 per atom");
    const auto reps = escape_representatives(T, E);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t j = i + 1; j < reps.size(); ++j) {
        if (angle(T, reps[i], reps[j]) < kAntipodal) continue;
        for (const Atom& a : nu.atoms()) {
          if (norm(a.point) == 0.0) continue;
          c.worst = std::max(c.worst, std::abs(angle(T, a.point, reps[i]) + angle(T, a.point, reps[j]) - kPi));
          ++c.samples;
        }
      }
    }
    rec.finish(1e-8, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cones", 0, "confinement",
                                 "for Z in E at most one unit member of C has angle >= pi - 1e-9 with Z");
    if (C.is_zero()) {
      rec.vacuous("C = {0}");
      return;
    }
    std::vector<TangentVector> members;
    for (const auto& g : C.generators) members.push_back(normalized(g));
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const TangentVector U = normalized(random_cone_member(C, rng));
      const bool dup = std::any_of(members.begin(), members.end(),
                                   [&](const TangentVector& w) { return distance(T, w, U) <= 1e-6; });
      if (!dup) members.push_back(U);
    }
    for (const auto& Z : escape_representatives(T, E)) {
      const auto far = std::count_if(members.begin(), members.end(),
                                     [&](const TangentVector& U) { return angle(T, Z, U) >= kAntipodal; });
      c.worst = std::max(c.worst, static_cast<double>(far) - 1.0);
      ++c.samples;
    }
    rec.finish(0.0, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cones", 0, "fluctuating_in_escape_and_hull", "sampled C members lie in E and hull");
    if (C.is_zero()) {
      rec.vacuous("C = {0}");
      return;
    }
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const TangentVector U = random_cone_member(C, rng);
      if (!escape_membership(T, nu, U, 10.0 * kEscapeTol)) c.worst = std::max(c.worst, 1.0);
      if (!cone_contains(ctx.hull, U)) c.worst = std::max(c.worst, 1.0);
      ++c.samples;
    }
    rec.finish(0.0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("cones", 0, "hull_depth_monotone", "depth-2 hull generators lie in the depth-4 hull");
    const ConvexCone shallow = hull_cone(T, nu, 2);
    for (const auto& g : shallow.generators) {
      if (!cone_contains(ctx.hull, g)) c.worst = std::max(c.worst, 1.0);
      ++c.samples;
    }
    rec.finish(0.0, 0);
  });
}

// ---- limit-log ------------------------------------------------------------

void limit_log_checks(Recorder& rec, const Context& ctx, Rng& rng, const SuiteOptions& opt) {
  const ConeSpace& T = ctx.ravel.space;

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 0, "norm_preservation", "| |L V| - |V| | <= 1e-12 (1 + |V|)");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const LimitStage stage = make_limit_stage(T, random_unit_vector(T, rng));
      const TangentVector V = random_vector(T, rng);
      c.worst = std::max(c.worst, std::abs(norm(limit_log(stage, V)) - norm(V)) / (1.0 + norm(V)));
      ++c.samples;
    }
    rec.finish(1e-12);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 4, "contraction",
                                 "angle(L V, L W) <= angle(V, W) + 1e-9 on random (Z, V, W)");
    for (std::size_t n = 0; n < opt.contraction_samples; ++n) {
      const LimitStage stage = make_limit_stage(T, random_unit_vector(T, rng));
      const TangentVector V = random_vector(T, rng);
      const TangentVector W = random_vector(T, rng);
      c.worst = std::max(c.worst, angle(stage.target, limit_log(stage, V), limit_log(stage, W)) - angle(T, V, W));
      ++c.samples;
    }
    rec.finish(1e-9, opt.contraction_samples);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 4, "contraction_equality_at_z",
                                 "|angle(L V, L Z) - angle(V, Z)| <= 1e-12");
    for (std::size_t n = 0; n < opt.contraction_samples; ++n) {
      const TangentVector Z = random_unit_vector(T, rng);
      const LimitStage stage = make_limit_stage(T, Z);
      const TangentVector V = random_vector(T, rng);
      c.worst = std::max(c.worst,
                         std::abs(angle(stage.target, limit_log(stage, V), limit_log(stage, Z)) - angle(T, V, Z)));
      ++c.samples;
    }
    rec.finish(1e-12, opt.contraction_samples);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 0, "antipode_identity",
                                 "angle(L Z, W) + angle(W, -L Z) = pi +- 1e-9");
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const LimitStage stage = make_limit_stage(T, random_unit_vector(T, rng));
      const TangentVector LZ = limit_log(stage, stage.z);
      const TangentVector W = random_vector(stage.target, rng);
      TangentVector minus = LZ;
      for (double& x : minus.u) x = -x;
      c.worst = std::max(c.worst, std::abs(angle(stage.target, LZ, W) + angle(stage.target, W, minus) - kPi));
      ++c.samples;
    }
    rec.finish(1e-9);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 0, "geodesic_isometry",
                                 "angles along a link geodesic (< pi, no point antipodal to Z) kept to 1e-9");
    if (T.link().empty()) {
      rec.vacuous("empty link");
      return;
    }
    const std::size_t s = static_cast<std::size_t>(T.spine_dim());
    for (std::size_t n = 0; n < 4 * opt.pair_samples && c.samples < opt.pair_samples; ++n) {
      const GraphPoint a = random_link_point(T.link(), rng);
      const GraphPoint b = random_link_point(T.link(), rng);
      const GraphDistance gd = graph_distance(T.link(), a, b);
      if (!(gd.distance < kPi) || gd.paths.size() > 1) continue;
      std::vector<TangentVector> pts;
      for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        pts.push_back(Point{std::vector<double>(s, 0.0), ConePart{T.link().walk(a, b, f * gd.distance), 1.0}});
      }
      const LimitStage stage = make_limit_stage(T, random_unit_vector(T, rng));
      // The hypothesis concerns all of the geodesic. Link distance along it
      // is 1-Lipschitz, so a grid maximum two steps below pi rules out any
      // far point; closer calls are skipped.
      constexpr int kGrid = 256;
      double widest = 0.0;
      for (int i = 0; i <= kGrid; ++i) {
        const TangentVector p{std::vector<double>(s, 0.0),
                              ConePart{T.link().walk(a, b, gd.distance * i / kGrid), 1.0}};
        widest = std::max(widest, angle(T, stage.z, p));
      }
      if (widest >= kPi - 2.0 * gd.distance / kGrid) continue;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
          const double before = angle(T, pts[i], pts[j]);
          const double after = angle(stage.target, limit_log(stage, pts[i]), limit_log(stage, pts[j]));
          c.worst = std::max(c.worst, std::abs(before - after));
        }
      }
      ++c.samples;
    }
    rec.finish(1e-9, 0);
  });
}

// ---- devissage ------------------------------------------------------------

void devissage_checks(Recorder& rec, const Context& ctx, Rng& rng, const SuiteOptions& opt) {
  const DevissageTrace& tr = ctx.trace;

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("devissage", 5, "stage_mean_preservation",
                                 "each stage's pushforward has its mean at the target apex, |mean| <= 1e-7");
    if (tr.stages.empty()) {
      rec.vacuous("no stage");
      return;
    }
    for (std::size_t i = 1; i < tr.ravels.size(); ++i) {
      const Ravel& r = tr.ravels[i];
      c.worst = std::max(c.worst, norm(frechet_mean(r.space, r.measure).mean));
      ++c.samples;
    }
    rec.finish(1e-7);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 0, "escape_preservation", "images of E members lie in the target E");
    if (tr.stages.empty()) {
      rec.vacuous("no stage");
      return;
    }
    for (std::size_t i = 0; i < tr.stages.size(); ++i) {
      const Ravel& src = tr.ravels[i];
      const Ravel& dst = tr.ravels[i + 1];
      const EscapeSections E = escape_sections(src.space, src.measure);
      for (std::size_t n = 0; n < opt.pair_samples; ++n) {
        const auto V = random_escape_member(src.space, E, rng);
        if (!V) break;
        const TangentVector L = limit_log(tr.stages[i], *V);
        if (norm(L) == 0.0) continue;
        c.worst = std::max(c.worst, std::abs(directional_derivative(dst.space, dst.measure, dst.space.apex(),
                                                                    normalized(L))));
        ++c.samples;
      }
    }
    rec.finish(10.0 * kEscapeTol, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 0, "target_spine_escape", "target spine axes pass escape membership");
    if (tr.stages.empty()) {
      rec.vacuous("no stage");
      return;
    }
    for (std::size_t i = 1; i < tr.ravels.size(); ++i) {
      const Ravel& r = tr.ravels[i];
      const std::size_t s = static_cast<std::size_t>(r.space.spine_dim());
      for (std::size_t j = 0; j < s; ++j) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> u(s, 0.0);
          u[j] = sign;
          c.worst = std::max(c.worst,
                             std::abs(directional_derivative(r.space, r.measure, r.space.apex(), Point{u, {}})));
          ++c.samples;
        }
      }
    }
    rec.finish(kEscapeTol, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("limit-log", 0, "hull_subcommutation",
                                 "images of hull generators lie in the hull of the image atoms (tol 1e-8)");
    if (tr.stages.empty()) {
      rec.vacuous("no stage");
      return;
    }
    for (std::size_t i = 0; i < tr.stages.size(); ++i) {
      const Ravel& src = tr.ravels[i];
      const Ravel& dst = tr.ravels[i + 1];
      const ConvexCone H = hull_cone(src.space, src.measure);
      const ConvexCone H2 = hull_cone(dst.space, dst.measure);
      for (const auto& g : H.generators) {
        if (!cone_contains(H2, limit_log(tr.stages[i], g))) c.worst = std::max(c.worst, 1.0);
        ++c.samples;
      }
    }
    rec.finish(0.0, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("devissage", 9, "codim_strictly_decreasing",
                                 "codim drops at every non-identity stage");
    if (tr.stages.empty()) {
      rec.vacuous("no stage");
      return;
    }
    for (std::size_t i = 0; i < tr.stages.size(); ++i) {
      if (tr.stages[i].identity) continue;
      c.worst = std::max(c.worst, static_cast<double>(tr.codims[i + 1] - tr.codims[i] + 1));
      ++c.samples;
    }
    rec.finish(0.0, 0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("devissage", 9, "termination_bound", "k <= initial codim");
    c.samples = 1;
    c.detail += " [codims";
    for (int k : tr.codims) c.detail += " " + std::to_string(k);
    c.detail += "]";
    c.worst = tr.k ? std::max(0.0, static_cast<double>(*tr.k - tr.codims.front())) : 0.0;
    rec.finish(0.0);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("devissage", 0, "m_at_most_dim", "m <= dim X");
    c.samples = 1;
    c.worst = std::max(0, tr.m - ctx.X.dim());
    rec.finish(0.0);
  });

  const CollapseMap cm(tr);
  const ConeSpace& T = ctx.ravel.space;
  const ConvexCone& C = ctx.ravel.working_cone;

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("devissage", 6, "inner_products_on_C",
                                 "|<U, V> - L U . L V| <= 1e-8 for U, V in C, >= 100 pairs");
    if (C.is_zero()) {
      rec.vacuous("C = {0}");
      return;
    }
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const TangentVector U = random_cone_member(C, rng);
      const TangentVector V = random_cone_member(C, rng);
      c.worst = std::max(c.worst, std::abs(inner_product(T, U, V) - dot(cm(U), cm(V))));
      ++c.samples;
    }
    rec.finish(1e-8, 100);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("devissage", 0, "composite_angles_on_C",
                                 "composite limit log keeps angles between C members to 1e-9");
    if (C.is_zero()) {
      rec.vacuous("C = {0}");
      return;
    }
    for (std::size_t n = 0; n < opt.pair_samples; ++n) {
      const TangentVector U = random_cone_member(C, rng);
      const TangentVector V = random_cone_member(C, rng);
      c.worst = std::max(c.worst,
                         std::abs(angle(tr.terminal_space, cm.composite(U), cm.composite(V)) - angle(T, U, V)));
      ++c.samples;
    }
    rec.finish(1e-9);
  });

  rec.guarded([&] {
    PropertyCheck& c = rec.begin("devissage", 0, "idempotent_past_termination", "one more step changes nothing");
    const Ravel& last = tr.ravels.back();
    c.samples = 1;
    if (!last.resolving.resolved_at_point) {
      auto [next, stage] = devissage_step(last);
      if (!stage.identity) c.worst = 1.0;
      for (std::size_t n = 0; n < 20; ++n) {
        const TangentVector V = random_vector(T, rng);
        const TangentVector W = cm.composite(V);
        c.worst = std::max(c.worst, distance(tr.terminal_space, limit_log(stage, W), W));
      }
    }
    rec.finish(0.0);
  });

  rec.guarded([&] {
    const CollapseVerification v = verify_collapse(cm, opt.pair_samples, rng.next());
    for (PropertyCheck c : v.checks) {
      int criterion = 0;
      if (c.name == "injective_on_C" || c.name == "pairing") criterion = 6;
      if (c.name == "hull_subspace") criterion = 10;
      c.name = "collapse_" + c.name;
      rec.add("devissage", criterion, c);
    }
  });
}

}  // namespace

bool FixtureReport::all_pass() const {
  return std::none_of(results.begin(), results.end(),
                      [](const PropertyResult& r) { return r.check.status == CheckStatus::kFail; });
}

std::size_t region_components(const MetricGraph& g, const SubgraphRegion& region) {
  // Pieces: region vertices first, then intervals; an interval touching an
  // edge end is joined to that end vertex.
  std::vector<VertexId> verts = region.vertices();
  std::vector<std::pair<EdgeId, Interval>> ivs;
  for (const auto& [e, list] : region.intervals()) {
    for (const Interval& iv : list) ivs.push_back({e, iv});
  }
  const std::size_t n = verts.size() + ivs.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const auto vertex_index = [&](VertexId v) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (verts[i] == v) return i;
    }
    return std::nullopt;
  };
  for (std::size_t k = 0; k < ivs.size(); ++k) {
    const auto& [e, iv] = ivs[k];
    const Edge& edge = g.edge(e);
    const std::size_t self = verts.size() + k;
    if (iv.lo <= 1e-12) {
      if (auto v = vertex_index(edge.from)) parent[find(self)] = find(*v);
    }
    if (iv.hi >= edge.length - 1e-12) {
      if (auto v = vertex_index(edge.to)) parent[find(self)] = find(*v);
    }
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) count += find(i) == i ? 1 : 0;
  return count;
}

FixtureReport run_fixture_suite(const std::string& name, const ExperimentConfig& cfg, const SuiteOptions& opt) {
  FixtureReport out{name, {}};
  Recorder rec(out);
  Rng rng(mix_seed(opt.seed, name));

  Context ctx{cfg.space, cfg.measure, {}, {}, {}, {}, {}};
  rec.begin("devissage", 0, "pipeline", "mean, tangent ravel, cones and devissage build without error");
  try {
    ctx.mean = frechet_mean(ctx.X, ctx.mu);
    ctx.trace = run_devissage(ctx.X, ctx.mu);
    ctx.ravel = ctx.trace.ravels.front();
    ctx.escape = escape_sections(ctx.ravel.space, ctx.ravel.measure);
    ctx.hull = hull_cone(ctx.ravel.space, ctx.ravel.measure);
  } catch (const std::exception& e) {
    rec.fail(e.what());
    graph_checks(rec, ctx, rng, opt);
    cone_space_checks(rec, ctx, rng, opt);
    return out;
  }
  rec.begin("devissage", 0, "pipeline", "mean, tangent ravel, cones and devissage build without error").samples = 1;
  rec.finish(0.0);

  graph_checks(rec, ctx, rng, opt);
  cone_space_checks(rec, ctx, rng, opt);
  frechet_checks(rec, ctx, rng, opt);
  cone_checks(rec, ctx, rng, opt);
  limit_log_checks(rec, ctx, rng, opt);
  devissage_checks(rec, ctx, rng, opt);
  return out;
}

std::vector<FixtureReport> run_suite(const std::vector<Fixture>& fixtures, const SuiteOptions& options,
                                     unsigned threads) {
  std::vector<FixtureReport> reports(fixtures.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(fixtures.size())));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < fixtures.size(); i = next++) {
      reports[i] = run_fixture_suite(fixtures[i].name, fixtures[i].config, options);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return reports;
}

}  // namespace strata::harness
