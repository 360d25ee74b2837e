#include "strata/harness/json_io.hpp"

namespace strata::harness {

Json to_json(const GraphPoint& g) {
  if (g.is_vertex()) return Json{{"vertex", g.vertex_id().value}};
  return Json{{"edge", g.edge_id().value}, {"t", g.t()}};
}

Json to_json(const Point& p) {
  Json j{{"u", p.u}};
  if (p.cone) {
    j["point"] = to_json(p.cone->g);
    j["r"] = p.cone->r;
  } else {
    j["point"] = nullptr;
    j["r"] = 0.0;
  }
  return j;
}

Json to_json(const StratumId& s) {
  return Json{{"stratum", to_string(s)}, {"dim", s.dim}, {"codim", s.codim}};
}

Json to_json(const ConeSpace& X) {
  Json vs = Json::array();
  for (VertexId v : X.link().vertices()) vs.push_back(v.value);
  Json es = Json::array();
  for (const Edge& e : X.link().edges()) {
    es.push_back(Json{{"id", e.id.value}, {"from", e.from.value}, {"to", e.to.value}, {"length", e.length}});
  }
  return Json{{"spine_dim", X.spine_dim()}, {"graph", {{"vertices", vs}, {"edges", es}}}, {"dim", X.dim()}};
}

Json to_json(const DiscreteMeasure& mu) {
  Json atoms = Json::array();
  for (const Atom& a : mu.atoms()) {
    Json j = to_json(a.point);
    j["weight"] = a.weight;
    atoms.push_back(j);
  }
  return Json{{"atoms", atoms}};
}

Json to_json(const MeanReport& r) {
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    cands.push_back(Json{{"stratum", to_string(c.stratum)}, {"point", to_json(c.point)}, {"value", c.value}});
  }
  return Json{{"mean", to_json(r.mean)},
              {"value", r.value},
              {"stratum", to_json(r.stratum)},
              {"candidates", cands},
              {"punctual", r.punctual},
              {"retractable", r.retractable},
              {"ambiguous_atoms", r.ambiguous_atoms},
              {"min_directional_derivative", r.min_directional_derivative}};
}

Json to_json(const SubgraphRegion& region) {
  Json vs = Json::array();
  for (VertexId v : region.vertices()) vs.push_back(v.value);
  Json ivs = Json::array();
  for (const auto& [e, list] : region.intervals()) {
    for (const Interval& iv : list) ivs.push_back(Json{{"edge", e.value}, {"lo", iv.lo}, {"hi", iv.hi}});
  }
  return Json{{"vertices", vs}, {"intervals", ivs}};
}

Json to_json(const ConvexCone& C) {
  Json gens = Json::array();
  for (const auto& g : C.generators) gens.push_back(to_json(g));
  const char* kind = C.kind == ConvexCone::Kind::kHull          ? "hull"
                     : C.kind == ConvexCone::Kind::kFluctuating ? "fluctuating"
                                                                : "generated";
  Json j{{"kind", kind},
         {"exact", C.exact},
         {"approximate", !C.exact},
         {"closure_depth", C.closure_depth},
         {"zero", C.is_zero()},
         {"generators", gens}};
  if (C.exact_region) j["region"] = to_json(*C.exact_region);
  return j;
}

Json to_json(const EscapeSections& E) {
  return Json{{"spine_directions", E.spine}, {"link_zero_set", to_json(E.zero_set)}, {"approximate", E.approximate}};
}

Json to_json(const LimitStage& stage) {
  Json transport = Json::array();
  for (const auto& t : stage.transport) {
    Json j{{"source", to_json(t.source)}, {"theta", t.theta}, {"tied", t.tied}};
    if (t.side) {
      j["side"] = Json{{"edge", t.side->edge.value},
                       {"heading", t.side->heading == Heading::kForward ? "forward" : "backward"}};
    }
    transport.push_back(j);
  }
  return Json{{"source", to_json(stage.source)},
              {"z", to_json(stage.z)},
              {"target", to_json(stage.target)},
              {"identity", stage.identity},
              {"transport", transport},
              {"tie_log", stage.tie_log}};
}

Json to_json(const DevissageTrace& trace) {
  Json ravels = Json::array();
  for (const Ravel& r : trace.ravels) {
    Json z = r.resolving.resolved_at_point ? Json(nullptr) : to_json(r.resolving.direction);
    ravels.push_back(Json{{"space", to_json(r.space)},
                          {"measure", to_json(r.measure)},
                          {"working_cone", to_json(r.working_cone)},
                          {"resolving", z},
                          {"resolved", is_resolved(r)}});
  }
  Json stages = Json::array();
  for (const auto& s : trace.stages) stages.push_back(to_json(s));
  return Json{{"ravels", ravels},
              {"stages", stages},
              {"codims", trace.codims},
              {"terminal_space", to_json(trace.terminal_space)},
              {"terminal_stratum", to_json(trace.terminal_stratum)},
              {"m", trace.m},
              {"k", trace.k ? Json(*trace.k) : Json(nullptr)},
              {"recomputed_larger", trace.recomputed_larger}};
}

Json to_json(const PropertyCheck& c) {
  return Json{{"name", c.name}, {"status", to_string(c.status)}, {"worst", c.worst},
              {"samples", c.samples}, {"detail", c.detail}};
}

}  // namespace strata::harness
