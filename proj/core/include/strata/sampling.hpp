#pragma once

#include "strata/cones.hpp"
#include "strata/random.hpp"

namespace strata {

/// A vertex or an edge point, each vertex and edge equally likely; edge
/// parameters uniform in the open edge.
GraphPoint random_link_point(const MetricGraph& G, Rng& rng);

/// Spine part standard normal; with probability `cone_probability` (and a
/// nonempty link) a cone part with radius uniform in [0.1, 2].
TangentVector random_vector(const ConeSpace& T, Rng& rng, double cone_probability = 0.8);

TangentVector random_unit_vector(const ConeSpace& T, Rng& rng);

/// A member of C with norm in [0.1, 2]: a scaled generator or a point on the
/// flat segment between two generators at angle < pi. Returns the zero
/// vector when C = {0}.
TangentVector random_cone_member(const ConvexCone& C, Rng& rng);

}  // namespace strata
