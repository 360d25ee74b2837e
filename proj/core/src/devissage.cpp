#include "strata/devissage.hpp"

#include <algorithm>
#include <cmath>

#include "strata/errors.hpp"
#include "strata/nnls.hpp"
#include "strata/sampling.hpp"

namespace strata {
namespace {

constexpr double kResolvedRadius = 1e-10;

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void finish(PropertyCheck& c, double limit) {
  c.status = c.worst <= limit ? CheckStatus::kPass : CheckStatus::kFail;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass:
      return "pass";
    case CheckStatus::kFail:
      return "fail";
    case CheckStatus::kVacuous:
      return "vacuous-pass";
  }
  return "?";
}

bool CollapseVerification::all_pass() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const PropertyCheck& c) { return c.status == CheckStatus::kFail; });
}

Ravel initial_ravel(const ConeSpace& X, const DiscreteMeasure& mu) {
  const MeanReport mean = frechet_mean(X, mu);
  if (!mean.retractable) {
    throw NotRetractableError("some atoms have no unique log at the mean", mean.ambiguous_atoms);
  }
  auto [T, nu] = pushforward_to_tangent(X, mu, mean.mean);
  ConvexCone C = fluctuating_cone(T, nu);
  ResolvingChoice z = resolving_direction(C);
  return Ravel{std::move(T), std::move(nu), std::move(C), std::move(z)};
}

bool is_resolved(const Ravel& r) {
  if (r.resolving.resolved_at_point) return true;
  if (r.working_cone.exact && r.working_cone.exact_region && !r.working_cone.exact_region->empty()) {
    return false;
  }
  return std::all_of(r.working_cone.generators.begin(), r.working_cone.generators.end(),
                     [](const TangentVector& v) { return v.radius() <= kResolvedRadius; });
}

std::pair<Ravel, LimitStage> devissage_step(const Ravel& r) {
  if (r.resolving.resolved_at_point) {
    throw ValidationError("the ravel has no resolving direction");
  }
  LimitStage stage = make_limit_stage(r.space, r.resolving.direction);
  if (stage.identity) return {r, std::move(stage)};

  DiscreteMeasure nu = pushforward_measure(stage, r.measure, &stage.tie_log);
  std::vector<TangentVector> images;
  for (const auto& g : r.working_cone.generators) images.push_back(limit_log(stage, g));

  ConvexCone C = fluctuating_cone(stage.target, nu);
  for (const auto& v : images) {
    if (norm(v) == 0.0) continue;
    const TangentVector n = normalized(v);
    C.support.push_back(n);
    const bool known = std::any_of(C.generators.begin(), C.generators.end(), [&](const TangentVector& w) {
      return distance(stage.target, w, n) <= 1e-12;
    });
    if (!known) C.generators.push_back(n);
  }
  ResolvingChoice z = resolving_direction(C);
  Ravel next{stage.target, std::move(nu), std::move(C), std::move(z)};
  return {std::move(next), std::move(stage)};
}

DevissageTrace run_devissage(const ConeSpace& X, const DiscreteMeasure& mu) {
  DevissageTrace trace;
  trace.ravels.push_back(initial_ravel(X, mu));
  trace.codims.push_back(codim(trace.ravels.back().space, trace.ravels.back().space.apex()));
  const int cap = trace.codims.front() + 2;

  for (;;) {
    const Ravel& cur = trace.ravels.back();
    if (cur.resolving.resolved_at_point) break;
    if (is_resolved(cur)) {
      if (trace.stages.empty()) {
        auto [same, stage] = devissage_step(cur);
        trace.stages.push_back(std::move(stage));
        trace.ravels.push_back(std::move(same));
        trace.codims.push_back(trace.codims.back());
        trace.recomputed_larger.push_back(false);
      }
      break;
    }
    if (static_cast<int>(trace.stages.size()) >= cap) {
      throw IterationBoundError("devissage exceeded " + std::to_string(cap) + " stages");
    }
    auto [next, stage] = devissage_step(cur);
    // Generators beyond the images of the previous cone come from recomputation.
    std::vector<TangentVector> images;
    for (const auto& g : cur.working_cone.generators) images.push_back(limit_log(stage, g));
    bool larger = false;
    for (const auto& g : next.working_cone.generators) {
      if (!generated_membership(next.space, images, g)) larger = true;
    }
    trace.stages.push_back(std::move(stage));
    trace.codims.push_back(codim(next.space, next.space.apex()));
    trace.ravels.push_back(std::move(next));
    trace.recomputed_larger.push_back(larger);
  }

  trace.terminal_space = trace.ravels.back().space;
  trace.terminal_stratum = stratum_of(trace.terminal_space, trace.terminal_space.apex());
  trace.m = trace.terminal_space.spine_dim();
  if (!trace.stages.empty()) trace.k = static_cast<int>(trace.stages.size()) - 1;
  return trace;
}

std::vector<double> terminal_projection(const ConeSpace& terminal, const TangentVector& W) {
  terminal.check_point(W);
  return W.u;
}

TangentVector CollapseMap::composite(const TangentVector& V) const {
  TangentVector out = V;
  for (const LimitStage& s : trace_.stages) out = limit_log(s, out);
  return out;
}

std::vector<double> CollapseMap::operator()(const TangentVector& V) const {
  return composite(V).u;
}

CollapseMap collapse(const ConeSpace& X, const DiscreteMeasure& mu) {
  return CollapseMap(run_devissage(X, mu));
}

CollapseVerification verify_collapse(const CollapseMap& cm, std::size_t budget, std::uint64_t seed) {
  Rng rng(seed);
  const Ravel& r0 = cm.trace().ravels.front();
  const ConeSpace& T = r0.space;
  const DiscreteMeasure& nu = r0.measure;
  const ConvexCone& C = r0.working_cone;
  const std::size_t m = static_cast<std::size_t>(cm.m());
  CollapseVerification out;

  std::vector<std::vector<double>> images;
  for (const Atom& a : nu.atoms()) images.push_back(cm(a.point));

  {
    PropertyCheck c{"mean_zero", CheckStatus::kPass, 0.0, nu.size(), "|sum w_i L(x_i)| <= 1e-7"};
    std::vector<double> mean(m, 0.0);
    for (std::size_t i = 0; i < nu.size(); ++i) {
      for (std::size_t j = 0; j < m; ++j) mean[j] += nu[i].weight * images[i][j];
    }
    c.worst = std::sqrt(dot(mean, mean));
    finish(c, 1e-7);
    out.checks.push_back(c);
  }
  {
    PropertyCheck c{"injective_on_C", CheckStatus::kPass, 0.0, 0, "|L U - L V| >= (1 - 1e-6) d(U, V)"};
    if (C.is_zero()) {
      c.status = CheckStatus::kVacuous;
    } else {
      for (std::size_t n = 0; n < budget; ++n) {
        const TangentVector U = random_cone_member(C, rng);
        const TangentVector V = random_cone_member(C, rng);
        const double d = distance(T, U, V);
        if (d <= 1e-9) continue;
        ++c.samples;
        c.worst = std::max(c.worst, (1.0 - 1e-6) * d - euclid(cm(U), cm(V)));
      }
      finish(c, 0.0);
    }
    out.checks.push_back(c);
  }
  {
    PropertyCheck c{"pairing", CheckStatus::kPass, 0.0, 0, "|<U,V> - <LU,LV>| <= 1e-8, U in C"};
    if (C.is_zero()) {
      c.status = CheckStatus::kVacuous;
    } else {
      for (std::size_t n = 0; n < budget; ++n) {
        const TangentVector U = random_cone_member(C, rng);
        const TangentVector V = (n % 4 == 0) ? nu[n / 4 % nu.size()].point : random_vector(T, rng);
        ++c.samples;
        c.worst = std::max(c.worst, std::abs(inner_product(T, U, V) - dot(cm(U), cm(V))));
      }
      finish(c, 1e-8);
    }
    out.checks.push_back(c);
  }
  {
    PropertyCheck c{"homogeneity", CheckStatus::kPass, 0.0, 0, "L(tV) = t L(V), t in {0, 1/2, 2}"};
    for (std::size_t n = 0; n < budget; ++n) {
      const TangentVector V = random_vector(T, rng);
      const auto LV = cm(V);
      for (double t : {0.0, 0.5, 2.0}) {
        auto LtV = cm(scale(V, t));
        if (t == 0.0 && LtV.size() != m) LtV.assign(m, 0.0);
        std::vector<double> tLV = LV;
        for (double& x : tLV) x *= t;
        ++c.samples;
        c.worst = std::max(c.worst, euclid(LtV, tLV) / (1.0 + norm(V)));
      }
    }
    finish(c, 1e-12);
    out.checks.push_back(c);
  }
  {
    PropertyCheck c{"continuity", CheckStatus::kPass, 0.0, 0, "|L V - L V'| <= d(V, V') + 1e-6"};
    for (std::size_t n = 0; n < budget; ++n) {
      const TangentVector V = random_vector(T, rng);
      const TangentVector W = random_vector(T, rng);
      TangentVector V2;
      try {
        V2 = geodesic_point(T, V, W, 1e-3);
      } catch (const AmbiguousGeodesicError&) {
        continue;
      }
      ++c.samples;
      c.worst = std::max(c.worst, euclid(cm(V), cm(V2)) - distance(T, V, V2));
    }
    finish(c, 1e-6);
    out.checks.push_back(c);
  }
  {
    PropertyCheck c{"hull_subspace", CheckStatus::kPass, 0.0, 0, "-v in hull(L#nu) for each generator v"};
    std::vector<std::vector<double>> cols;
    for (const auto& v : images) {
      const double n = std::sqrt(dot(v, v));
      if (n > 1e-12) {
        std::vector<double> u = v;
        for (double& x : u) x /= n;
        cols.push_back(u);
      }
    }
    if (cols.empty()) {
      c.status = CheckStatus::kVacuous;
    } else {
      for (const auto& v : cols) {
        std::vector<double> neg = v;
        for (double& x : neg) x = -x;
        ++c.samples;
        c.worst = std::max(c.worst, nnls(cols, neg).residual);
      }
      finish(c, 1e-8);
    }
    out.checks.push_back(c);
  }
  return out;
}

}  // namespace strata
