#include "strata/sampling.hpp"

namespace strata {

GraphPoint random_link_point(const MetricGraph& G, Rng& rng) {
  const std::size_t nv = G.vertices().size();
  const std::size_t n = nv + G.edges().size();
  const std::size_t k = rng.index(n);
  if (k < nv) return OnVertex{G.vertices()[k]};
  const Edge& e = G.edges()[k - nv];
  double t = rng.uniform(0.0, e.length);
  if (t <= 1e-9) t = 1e-9 * e.length + 1e-9;
  return G.point_on_edge(e.id, std::min(t, e.length * (1.0 - 1e-9)));
}

TangentVector random_vector(const ConeSpace& T, Rng& rng, double cone_probability) {
  TangentVector v;
  for (int j = 0; j < T.spine_dim(); ++j) v.u.push_back(rng.normal());
  if (!T.link().empty() && rng.uniform() < cone_probability) {
    v.cone = ConePart{random_link_point(T.link(), rng), rng.uniform(0.1, 2.0)};
  }
  return v;
}

TangentVector random_unit_vector(const ConeSpace& T, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const TangentVector v = random_vector(T, rng);
    if (norm(v) > 1e-6) return normalized(v);
  }
  return T.apex();
}

TangentVector random_cone_member(const ConvexCone& C, Rng& rng) {
  const ConeSpace& T = C.ambient;
  if (C.is_zero()) return T.apex();
  const double radius = rng.uniform(0.1, 2.0);
  if (C.exact && C.exact_region) {
    const SubgraphRegion& R = *C.exact_region;
    std::vector<std::pair<EdgeId, Interval>> ivs;
    for (const auto& [e, list] : R.intervals()) {
      for (const Interval& iv : list) ivs.push_back({e, iv});
    }
    const std::size_t n = R.vertices().size() + ivs.size();
    const std::size_t k = rng.index(n);
    GraphPoint g = OnVertex{VertexId{0}};
    if (k < R.vertices().size()) {
      g = OnVertex{R.vertices()[k]};
    } else {
      const auto& [e, iv] = ivs[k - R.vertices().size()];
      g = T.link().point_on_edge(e, rng.uniform(iv.lo, iv.hi));
    }
    return Point{std::vector<double>(static_cast<std::size_t>(T.spine_dim()), 0.0), ConePart{g, radius}};
  }
  const auto& gens = C.generators;
  const std::size_t i = rng.index(gens.size());
  const std::size_t j = rng.index(gens.size());
  if (i != j && angle(T, gens[i], gens[j]) < kPi - 1e-9) {
    return scale(normalized(geodesic_point(T, gens[i], gens[j], rng.uniform())), radius);
  }
  return scale(gens[i], radius);
}

}  // namespace strata
