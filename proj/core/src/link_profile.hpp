#pragma once

// Piecewise sinusoid description of
//   h(g) = sum_i c_i cos(min(d(g, g_i), pi))
// along one edge. Between breakpoints every distance is affine in the edge
// parameter (slope +-1) or capped at pi, so h(t) = A cos t + B sin t + C.

#include <vector>

#include "strata/metric_graph.hpp"

namespace strata::detail {

struct WeightedLinkPoint {
  GraphPoint g;
  double c = 0.0;
};

struct SinusoidPiece {
  double a = 0.0;
  double b = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double eval(double t) const;
};

double support_value(const MetricGraph& G, const std::vector<WeightedLinkPoint>& pts,
                     const GraphPoint& g);

std::vector<SinusoidPiece> edge_profile(const MetricGraph& G, EdgeId e,
                                        const std::vector<WeightedLinkPoint>& pts);

/// Parameters in [piece.a, piece.b] where the piece may attain its maximum.
std::vector<double> piece_max_candidates(const SinusoidPiece& piece);

}  // namespace strata::detail
