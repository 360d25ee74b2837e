#include "strata/cone_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "strata/errors.hpp"

namespace strata {
namespace {

double spine_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double link_angle(const MetricGraph& g, const std::optional<ConePart>& a,
                  const std::optional<ConePart>& b) {
  return angular_distance(g, a->g, b->g);
}

// Squared conical distance between cone parts of radii r1, r2 at angle delta.
double cone_sq(double r1, double r2, double delta) {
  const double h = std::sin(0.5 * delta);
  return (r1 - r2) * (r1 - r2) + 4.0 * r1 * r2 * h * h;
}

Point with_cone(std::vector<double> u, const GraphPoint& g, double r) {
  Point p{std::move(u), {}};
  if (r > 0.0) p.cone = ConePart{g, r};
  return p;
}

// Cone part reached by moving from (g, r) by the planar displacement
// (a radial, b tangential) where the tangential side is departure d.
std::optional<ConePart> develop_step(const MetricGraph& link, const GraphPoint& g, double r,
                                     double a, double b, std::optional<Departure> d) {
  const double x = r + a;
  if (b == 0.0 || !d) {
    if (x > 0.0) return ConePart{g, x};
    if (x == 0.0) return std::nullopt;
    throw StepTooLargeError("step passes through the apex");
  }
  const double R = std::hypot(x, b);
  const double phi = std::atan2(std::abs(b), x);
  auto reached = link.advance(g, *d, phi);
  if (!reached) throw StepTooLargeError("step leaves the star of the link point " + to_string(g));
  if (!(R > 0.0)) return std::nullopt;
  return ConePart{*reached, R};
}

}  // namespace

Point make_point(std::vector<double> u, std::optional<GraphPoint> g, double r) {
  Point p{std::move(u), {}};
  if (g) p.cone = ConePart{*g, r};
  return p;
}

std::string to_string(const StratumId& s) {
  switch (s.kind) {
    case StratumKind::kSpine:
      return "spine";
    case StratumKind::kRay:
      return "ray(" + std::to_string(s.id) + ")";
    case StratumKind::kSector:
      return "sector(" + std::to_string(s.id) + ")";
  }
  return "?";
}

ConeSpace ConeSpace::create(int spine_dim, MetricGraph link) {
  if (spine_dim < 0) throw ValidationError("spine dimension must be nonnegative");
  const Cat1Report report = validate_cat1(link);
  if (!report.ok) {
    std::ostringstream os;
    os << "link has a cycle of length " << report.violating_length << " < 2*pi (edges";
    for (EdgeId e : report.violating_cycle) os << ' ' << e.value;
    os << ')';
    throw ValidationError(os.str());
  }
  return ConeSpace(spine_dim, std::move(link));
}

ConeSpace ConeSpace::unchecked(int spine_dim, MetricGraph link) {
  if (spine_dim < 0) throw ValidationError("spine dimension must be nonnegative");
  return ConeSpace(spine_dim, std::move(link));
}

int ConeSpace::dim() const {
  if (link_.has_edges()) return spine_dim_ + 2;
  if (!link_.empty()) return spine_dim_ + 1;
  return spine_dim_;
}

void ConeSpace::check_point(const Point& p) const {
  if (p.u.size() != static_cast<std::size_t>(spine_dim_)) {
    throw InvalidPointError("point has " + std::to_string(p.u.size()) +
                            " spine coordinates, expected " + std::to_string(spine_dim_));
  }
  for (double x : p.u) {
    if (!std::isfinite(x)) throw InvalidPointError("non-finite spine coordinate");
  }
  if (p.cone) {
    if (!(p.cone->r > 0.0) || !std::isfinite(p.cone->r)) {
      throw InvalidPointError("cone radius must be finite and positive");
    }
    link_.check_point(p.cone->g);
  }
}

std::string describe(const ConeSpace& X) {
  std::ostringstream os;
  os << "R^" << X.spine_dim() << " x Cone(" << X.link().vertices().size() << " vertices, "
     << X.link().edges().size() << " edges)";
  return os.str();
}

ConeSpace tangent_cone(const ConeSpace& X, const Point& p) {
  X.check_point(p);
  if (!p.cone) return X;
  const GraphPoint& g = p.cone->g;
  if (!g.is_vertex()) return ConeSpace::create(X.spine_dim() + 2, MetricGraph{});
  std::vector<VertexId> legs;
  for (EdgeId e : X.link().incident(g.vertex_id())) legs.push_back(VertexId{e.value});
  return ConeSpace::create(X.spine_dim() + 1, MetricGraph(std::move(legs), {}));
}

double distance(const ConeSpace& X, const Point& p, const Point& q) {
  double sq = spine_sq(p.u, q.u);
  const double r1 = p.radius();
  const double r2 = q.radius();
  if (p.cone && q.cone) {
    sq += cone_sq(r1, r2, link_angle(X.link(), p.cone, q.cone));
  } else {
    sq += (r1 - r2) * (r1 - r2);
  }
  return std::sqrt(std::max(0.0, sq));
}

Point geodesic_point(const ConeSpace& X, const Point& p, const Point& q, double t) {
  X.check_point(p);
  X.check_point(q);
  if (t <= 0.0) return p;
  if (t >= 1.0) return q;
  std::vector<double> u(p.u.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (1.0 - t) * p.u[i] + t * q.u[i];

  const double rp = p.radius();
  const double rq = q.radius();
  if (!p.cone && !q.cone) return Point{std::move(u), {}};
  if (!p.cone) return with_cone(std::move(u), q.cone->g, t * rq);
  if (!q.cone) return with_cone(std::move(u), p.cone->g, (1.0 - t) * rp);

  const GraphDistance gd = graph_distance(X.link(), p.cone->g, q.cone->g);
  if (gd.distance >= kPi) {
    const double c = (1.0 - t) * rp - t * rq;
    if (c > 0.0) return with_cone(std::move(u), p.cone->g, c);
    if (c < 0.0) return with_cone(std::move(u), q.cone->g, -c);
    return Point{std::move(u), {}};
  }
  if (gd.paths.size() > 1) {
    throw AmbiguousGeodesicError("link points " + to_string(p.cone->g) + " and " +
                                 to_string(q.cone->g) + " are joined by several short paths");
  }
  const double theta = gd.distance;
  const double mx = (1.0 - t) * rp + t * rq * std::cos(theta);
  const double my = t * rq * std::sin(theta);
  const double phi = std::clamp(std::atan2(my, mx), 0.0, theta);
  const GraphPoint g = X.link().walk(p.cone->g, q.cone->g, phi);
  return with_cone(std::move(u), g, std::hypot(mx, my));
}

TangentVector log_map(const ConeSpace& X, const Point& p, const Point& x) {
  X.check_point(p);
  X.check_point(x);
  std::vector<double> du(p.u.size());
  for (std::size_t i = 0; i < du.size(); ++i) du[i] = x.u[i] - p.u[i];
  if (!p.cone) return Point{std::move(du), x.cone};

  const double rp = p.cone->r;
  const GraphPoint& gp = p.cone->g;
  double radial = 0.0;
  double tangential = 0.0;
  std::optional<Departure> dep;
  if (!x.cone) {
    radial = -rp;
  } else {
    const double rx = x.cone->r;
    const GraphDistance gd = graph_distance(X.link(), gp, x.cone->g);
    if (gd.distance >= kPi) {
      radial = -(rp + rx);
    } else if (gd.paths.empty()) {
      radial = rx - rp;
    } else {
      if (gd.paths.size() > 1) {
        throw CutLocusError("log at " + to_string(gp) + " toward " + to_string(x.cone->g) +
                            " is not unique");
      }
      radial = rx * std::cos(gd.distance) - rp;
      tangential = rx * std::sin(gd.distance);
      dep = gd.paths.front().departure;
    }
  }
  du.push_back(radial);
  if (!gp.is_vertex()) {
    const double sign = (dep && dep->heading == Heading::kBackward) ? -1.0 : 1.0;
    du.push_back(dep ? sign * tangential : 0.0);
    return Point{std::move(du), {}};
  }
  Point v{std::move(du), {}};
  if (dep && tangential > 0.0) v.cone = ConePart{GraphPoint::vertex(dep->edge.value), tangential};
  return v;
}

Point shoot(const ConeSpace& X, const Point& p, const TangentVector& V, double t) {
  X.check_point(p);
  if (t < 0.0) throw StepTooLargeError("negative step");
  if (t == 0.0) return p;
  const std::size_t s = p.u.size();
  std::vector<double> u(s);
  for (std::size_t i = 0; i < s; ++i) u[i] = p.u[i] + t * V.u.at(i);

  if (!p.cone) {
    Point out{std::move(u), {}};
    if (V.cone && V.cone->r * t > 0.0) out.cone = ConePart{V.cone->g, V.cone->r * t};
    return out;
  }
  const GraphPoint& g = p.cone->g;
  const double a = t * V.u.at(s);
  if (!g.is_vertex()) {
    const double b = t * V.u.at(s + 1);
    std::optional<Departure> d;
    if (b != 0.0) d = Departure{g.edge_id(), b > 0.0 ? Heading::kForward : Heading::kBackward};
    Point out{std::move(u), develop_step(X.link(), g, p.cone->r, a, b, d)};
    return out;
  }
  double b = 0.0;
  std::optional<Departure> d;
  if (V.cone) {
    b = t * V.cone->r;
    const EdgeId e{V.cone->g.vertex_id().value};
    const Edge& edge = X.link().edge(e);
    d = Departure{e, edge.from == g.vertex_id() ? Heading::kForward : Heading::kBackward};
  }
  return Point{std::move(u), develop_step(X.link(), g, p.cone->r, a, b, d)};
}

double inner_product(const ConeSpace& T, const TangentVector& V, const TangentVector& W) {
  double s = 0.0;
  for (std::size_t i = 0; i < V.u.size(); ++i) s += V.u[i] * W.u[i];
  if (V.cone && W.cone) s += V.cone->r * W.cone->r * std::cos(link_angle(T.link(), V.cone, W.cone));
  return s;
}

double norm(const TangentVector& V) {
  double s = 0.0;
  for (double x : V.u) s += x * x;
  s += V.radius() * V.radius();
  return std::sqrt(s);
}

TangentVector scale(const TangentVector& V, double t) {
  TangentVector out = V;
  for (double& x : out.u) x *= t;
  if (out.cone) {
    out.cone->r *= t;
    if (!(out.cone->r > 0.0)) out.cone.reset();
  }
  return out;
}

TangentVector normalized(const TangentVector& V) {
  const double n = norm(V);
  return n > 0.0 ? scale(V, 1.0 / n) : V;
}

double angle(const ConeSpace& T, const TangentVector& V, const TangentVector& W) {
  const double nv = norm(V);
  const double nw = norm(W);
  if (nv == 0.0 || nw == 0.0) return 0.0;
  // 2 atan2(|a - b|, |a + b|) for the unit vectors a, b; both chords are
  // evaluated in cancellation-free form so the angle is accurate near 0 and pi.
  double minus = 0.0;
  double plus = 0.0;
  for (std::size_t i = 0; i < V.u.size(); ++i) {
    const double a = V.u[i] / nv;
    const double b = W.u[i] / nw;
    minus += (a - b) * (a - b);
    plus += (a + b) * (a + b);
  }
  const double r1 = V.radius() / nv;
  const double r2 = W.radius() / nw;
  if (V.cone && W.cone) {
    const double delta = link_angle(T.link(), V.cone, W.cone);
    const double c = std::cos(0.5 * delta);
    minus += cone_sq(r1, r2, delta);
    plus += (r1 - r2) * (r1 - r2) + 4.0 * r1 * r2 * c * c;
  } else {
    minus += (r1 - r2) * (r1 - r2);
    plus += (r1 + r2) * (r1 + r2);
  }
  return 2.0 * std::atan2(std::sqrt(std::max(0.0, minus)), std::sqrt(std::max(0.0, plus)));
}

StratumId stratum_of(const ConeSpace& X, const Point& p) {
  const int s = X.spine_dim();
  StratumId id;
  if (!p.cone) {
    id.kind = StratumKind::kSpine;
    id.dim = s;
    id.codim = X.dim() - s;
  } else if (p.cone->g.is_vertex()) {
    id.kind = StratumKind::kRay;
    id.id = p.cone->g.vertex_id().value;
    id.dim = s + 1;
    id.codim = X.link().degree(p.cone->g.vertex_id()) > 0 ? 1 : 0;
  } else {
    id.kind = StratumKind::kSector;
    id.id = p.cone->g.edge_id().value;
    id.dim = s + 2;
    id.codim = 0;
  }
  return id;
}

int codim(const ConeSpace& X, const Point& p) { return stratum_of(X, p).codim; }

}  // namespace strata
