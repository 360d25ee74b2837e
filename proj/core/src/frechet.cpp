#include "strata/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "link_profile.hpp"
#include "strata/errors.hpp"

namespace strata {
namespace {

constexpr double kFirstOrderTol = 1e-8;
// h(g*) at or below this is treated as "no positive cone part".
constexpr double kApexThreshold = 1e-14;

std::vector<detail::WeightedLinkPoint> weighted_link_points(const DiscreteMeasure& mu) {
  std::vector<detail::WeightedLinkPoint> pts;
  for (const Atom& a : mu.atoms()) {
    if (a.point.cone) pts.push_back({a.point.cone->g, a.weight * a.point.cone->r});
  }
  return pts;
}

std::vector<double> spine_mean(const ConeSpace& X, const DiscreteMeasure& mu) {
  std::vector<double> u(static_cast<std::size_t>(X.spine_dim()), 0.0);
  for (const Atom& a : mu.atoms()) {
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += a.weight * a.point.u[j];
  }
  return u;
}

int stratum_rank(const StratumId& s) { return static_cast<int>(s.kind); }

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ValidationError("measure has no atoms");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const double w = atoms_[i].weight;
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError("atom " + std::to_string(i) + " has a non-positive weight");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw ValidationError("weights sum to " + std::to_string(total) + ", expected 1");
  }
}

void DiscreteMeasure::check(const ConeSpace& X) const {
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    try {
      X.check_point(atoms_[i].point);
    } catch (const InvalidPointError& e) {
      throw InvalidPointError("atom " + std::to_string(i) + ": " + e.what());
    }
  }
}

double half_square_distance(const ConeSpace& X, const Point& w, const Point& p) {
  const double d = distance(X, w, p);
  return 0.5 * d * d;
}

double frechet_value(const ConeSpace& X, const DiscreteMeasure& mu, const Point& p) {
  double f = 0.0;
  for (const Atom& a : mu.atoms()) f += a.weight * half_square_distance(X, a.point, p);
  return f;
}

double link_support_function(const ConeSpace& X, const DiscreteMeasure& mu, const GraphPoint& g) {
  return detail::support_value(X.link(), weighted_link_points(mu), g);
}

std::optional<LinkMaximum> maximize_link_support(const ConeSpace& X, const DiscreteMeasure& mu) {
  const MetricGraph& G = X.link();
  if (G.empty()) return std::nullopt;
  const auto pts = weighted_link_points(mu);
  std::optional<LinkMaximum> best;
  auto consider = [&](const GraphPoint& g) {
    const double h = detail::support_value(G, pts, g);
    if (!best || h > best->value + kApexThreshold) best = LinkMaximum{g, h};
  };
  for (VertexId v : G.vertices()) consider(OnVertex{v});
  for (const Edge& e : G.edges()) {
    for (const auto& piece : detail::edge_profile(G, e.id, pts)) {
      for (double t : detail::piece_max_candidates(piece)) {
        if (t > 0.0 && t < e.length) consider(G.point_on_edge(e.id, t));
      }
    }
  }
  return best;
}

std::vector<TangentVector> direction_sample(const ConeSpace& T) {
  const auto s = static_cast<std::size_t>(T.spine_dim());
  std::vector<TangentVector> out;
  std::vector<GraphPoint> links;
  for (VertexId v : T.link().vertices()) links.emplace_back(OnVertex{v});
  for (const Edge& e : T.link().edges()) links.push_back(T.link().point_on_edge(e.id, 0.5 * e.length));
  for (std::size_t j = 0; j < s; ++j) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> u(s, 0.0);
      u[j] = sign;
      out.push_back(Point{u, {}});
    }
  }
  for (const GraphPoint& g : links) {
    out.push_back(Point{std::vector<double>(s, 0.0), ConePart{g, 1.0}});
    for (std::size_t j = 0; j < s; ++j) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> u(s, 0.0);
        u[j] = sign * std::sqrt(0.5);
        out.push_back(Point{u, ConePart{g, std::sqrt(0.5)}});
      }
    }
  }
  if (s >= 2) {
    for (double a : {0.3, 1.1, 2.2, 4.0, 5.3}) {
      std::vector<double> u(s, 0.0);
      u[0] = std::cos(a);
      u[1] = std::sin(a);
      out.push_back(Point{u, {}});
    }
  }
  return out;
}

double directional_derivative(const ConeSpace& X, const DiscreteMeasure& mu, const Point& p,
                              const TangentVector& V) {
  const ConeSpace T = tangent_cone(X, p);
  std::vector<std::size_t> bad;
  double sum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    try {
      sum += mu[i].weight * inner_product(T, log_map(X, p, mu[i].point), V);
    } catch (const CutLocusError&) {
      bad.push_back(i);
    }
  }
  if (!bad.empty()) throw CutLocusError("log map is not unique for some atoms", bad);
  return -sum;
}

std::pair<ConeSpace, DiscreteMeasure> pushforward_to_tangent(const ConeSpace& X,
                                                             const DiscreteMeasure& mu,
                                                             const Point& p) {
  ConeSpace T = tangent_cone(X, p);
  std::vector<Atom> atoms;
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    try {
      atoms.push_back(Atom{log_map(X, p, mu[i].point), mu[i].weight});
    } catch (const CutLocusError&) {
      bad.push_back(i);
    }
  }
  if (!bad.empty()) throw CutLocusError("log map is not unique for some atoms", bad);
  return {std::move(T), DiscreteMeasure(std::move(atoms))};
}

MeanReport frechet_mean(const ConeSpace& X, const DiscreteMeasure& mu) {
  mu.check(X);
  const std::vector<double> ubar = spine_mean(X, mu);
  const MetricGraph& G = X.link();
  const auto pts = weighted_link_points(mu);

  MeanReport report;
  auto add_candidate = [&](StratumId stratum, const std::optional<GraphPoint>& g, double h) {
    Point p{ubar, {}};
    if (g && h > kApexThreshold) p.cone = ConePart{*g, h};
    report.candidates.push_back(MeanCandidate{stratum, p, frechet_value(X, mu, p)});
  };

  add_candidate(stratum_of(X, X.apex()), std::nullopt, 0.0);
  for (VertexId v : G.vertices()) {
    const GraphPoint g = OnVertex{v};
    add_candidate(stratum_of(X, Point{ubar, ConePart{g, 1.0}}), g,
                  detail::support_value(G, pts, g));
  }
  for (const Edge& e : G.edges()) {
    std::optional<GraphPoint> arg;
    double best = -kInfinity;
    for (const auto& piece : detail::edge_profile(G, e.id, pts)) {
      for (double t : detail::piece_max_candidates(piece)) {
        if (!(t > 0.0 && t < e.length)) continue;
        const GraphPoint g = G.point_on_edge(e.id, t);
        if (g.is_vertex()) continue;
        const double h = detail::support_value(G, pts, g);
        if (h > best + kApexThreshold) {
          best = h;
          arg = g;
        }
      }
    }
    // The supremum over the open sector may sit on its boundary rays; then
    // the sector contributes nothing new.
    if (arg) add_candidate(StratumId{StratumKind::kSector, e.id.value, X.spine_dim() + 2, 0}, arg, best);
  }

  std::stable_sort(report.candidates.begin(), report.candidates.end(),
                   [](const MeanCandidate& a, const MeanCandidate& b) {
                     return std::make_tuple(a.value, stratum_rank(a.stratum), a.stratum.id) <
                            std::make_tuple(b.value, stratum_rank(b.stratum), b.stratum.id);
                   });
  // Values agreeing to rounding are the same minimizer; prefer the lowest stratum.
  std::size_t pick = 0;
  for (std::size_t i = 1; i < report.candidates.size(); ++i) {
    if (report.candidates[i].value > report.candidates[0].value + 1e-14) break;
    if (stratum_rank(report.candidates[i].stratum) < stratum_rank(report.candidates[pick].stratum)) {
      pick = i;
    }
  }
  report.mean = report.candidates[pick].point;
  report.value = report.candidates[pick].value;
  report.stratum = stratum_of(X, report.mean);

  for (std::size_t i = 0; i < mu.size(); ++i) {
    try {
      (void)log_map(X, report.mean, mu[i].point);
    } catch (const CutLocusError&) {
      report.ambiguous_atoms.push_back(i);
    }
  }
  report.retractable = report.ambiguous_atoms.empty();
  if (report.retractable) {
    const ConeSpace T = tangent_cone(X, report.mean);
    double lo = kInfinity;
    for (const TangentVector& V : direction_sample(T)) {
      lo = std::min(lo, directional_derivative(X, mu, report.mean, V));
    }
    report.min_directional_derivative = std::isfinite(lo) ? lo : 0.0;
    if (report.min_directional_derivative < -kFirstOrderTol) {
      throw NumericalFailure("first-order condition fails at the computed mean (derivative " +
                             std::to_string(report.min_directional_derivative) + ")");
    }
  }
  return report;
}

LocalizationReport check_localized(const ConeSpace& X, const DiscreteMeasure& mu) {
  LocalizationReport out;
  const MeanReport m = frechet_mean(X, mu);
  out.mean = m.mean;
  out.punctual = true;
  out.retractable = m.retractable;
  out.ambiguous_atoms = m.ambiguous_atoms;
  return out;
}

Point frechet_mean_oracle(const ConeSpace& X, const DiscreteMeasure& mu, double step) {
  mu.check(X);
  const auto s = static_cast<std::size_t>(X.spine_dim());
  std::vector<double> u(s, 0.0);
  // The spine part of F separates by coordinate.
  for (std::size_t j = 0; j < s; ++j) {
    double lo = kInfinity;
    double hi = -kInfinity;
    for (const Atom& a : mu.atoms()) {
      lo = std::min(lo, a.point.u[j]);
      hi = std::max(hi, a.point.u[j]);
    }
    double best = kInfinity;
    for (double x = lo; x <= hi + 0.5 * step; x += step) {
      const double xc = std::min(x, hi);
      double f = 0.0;
      for (const Atom& a : mu.atoms()) f += a.weight * (xc - a.point.u[j]) * (xc - a.point.u[j]);
      if (f < best) {
        best = f;
        u[j] = xc;
      }
    }
  }

  double rmax = 0.0;
  for (const Atom& a : mu.atoms()) rmax = std::max(rmax, a.point.radius());
  std::vector<GraphPoint> grid;
  const MetricGraph& G = X.link();
  for (VertexId v : G.vertices()) grid.emplace_back(OnVertex{v});
  for (const Edge& e : G.edges()) {
    for (double t = step; t < e.length - 0.5 * step; t += step) grid.emplace_back(OnEdge{e.id, t});
  }

  auto cone_value = [&](const std::vector<double>& delta, double r) {
    double f = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const double ri = mu[i].point.radius();
      const double c = mu[i].point.cone ? std::cos(delta[i]) : 0.0;
      f += mu[i].weight * (r * r + ri * ri - 2.0 * r * ri * c);
    }
    return 0.5 * f;
  };

  std::vector<double> none(mu.size(), kPi);
  double best = cone_value(none, 0.0);
  Point out{u, {}};
  std::vector<double> delta(mu.size());
  for (const GraphPoint& g : grid) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      delta[i] = mu[i].point.cone ? angular_distance(G, g, mu[i].point.cone->g) : kPi;
    }
    for (double r = step; r <= rmax + 0.5 * step; r += step) {
      const double f = cone_value(delta, r);
      if (f < best) {
        best = f;
        out.cone = ConePart{g, r};
      }
    }
  }
  return out;
}

}  // namespace strata
