#include "strata/limit_log.hpp"

#include <cmath>

#include "strata/errors.hpp"

namespace strata {
namespace {

struct Side {
  double theta = 0.0;
  std::optional<Departure> departure;
  bool tied = false;
};

Side side_of(const MetricGraph& G, const GraphPoint& gz, const GraphPoint& g) {
  Side s;
  const GraphDistance gd = graph_distance(G, gz, g);
  s.theta = std::min(gd.distance, kPi);
  if (s.theta < kPi && !gd.paths.empty()) {
    s.departure = gd.paths.front().departure;
    s.tied = gd.paths.size() > 1;
  }
  return s;
}

}  // namespace

ConeSpace limit_tangent_cone(const ConeSpace& X, const TangentVector& Z) {
  if (norm(Z) == 0.0) throw ValidationError("limit direction must be nonzero");
  if (!Z.cone) return X;
  return tangent_cone(X, Point{std::vector<double>(static_cast<std::size_t>(X.spine_dim()), 0.0),
                               ConePart{Z.cone->g, 1.0}});
}

LimitStage make_limit_stage(const ConeSpace& X, const TangentVector& Z) {
  X.check_point(Z);
  LimitStage stage;
  stage.source = X;
  stage.z = normalized(Z);
  stage.target = limit_tangent_cone(X, stage.z);
  stage.identity = !stage.z.cone.has_value();
  if (!stage.identity) {
    const GraphPoint& gz = stage.z.cone->g;
    for (VertexId v : X.link().vertices()) {
      const Side s = side_of(X.link(), gz, OnVertex{v});
      stage.transport.push_back(TransportEntry{OnVertex{v}, s.theta, s.departure, s.tied});
    }
  }
  return stage;
}

TangentVector limit_log(const LimitStage& stage, const TangentVector& V, bool* tied) {
  if (tied) *tied = false;
  if (stage.identity) return V;
  const GraphPoint& gz = stage.z.cone->g;
  TangentVector out{V.u, {}};
  double radial = 0.0;
  double normal = 0.0;
  std::optional<Departure> dep;
  if (V.cone) {
    const Side s = side_of(stage.source.link(), gz, V.cone->g);
    if (tied) *tied = s.tied;
    radial = V.cone->r * std::cos(s.theta);
    if (s.departure) {
      normal = V.cone->r * std::sin(s.theta);
      dep = s.departure;
    }
  }
  out.u.push_back(radial);
  if (!gz.is_vertex()) {
    const double sign = (dep && dep->heading == Heading::kBackward) ? -1.0 : 1.0;
    out.u.push_back(dep ? sign * normal : 0.0);
    return out;
  }
  if (dep && normal > 0.0) out.cone = ConePart{GraphPoint::vertex(dep->edge.value), normal};
  return out;
}

DiscreteMeasure pushforward_measure(const LimitStage& stage, const DiscreteMeasure& nu,
                                    std::vector<std::size_t>* ties) {
  std::vector<Atom> atoms;
  atoms.reserve(nu.size());
  for (std::size_t i = 0; i < nu.size(); ++i) {
    bool tied = false;
    atoms.push_back(Atom{limit_log(stage, nu[i].point, &tied), nu[i].weight});
    if (tied && ties) ties->push_back(i);
  }
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace strata
