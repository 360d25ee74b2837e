#pragma once

// Named spaces. Vertex and edge ids are documented per constructor because
// configs and tests refer to them.

#include "strata/cone_space.hpp"

namespace strata::gallery {

/// Cone over k isolated vertices with ids 1..k (s = 0).
ConeSpace spider(int k);

/// R^s x spider(k); pages are link vertices 1..k.
ConeSpace open_book(int k, int s);

/// Cone over a cycle of circumference c >= 2*pi. Vertices 0 (arc position 0)
/// and 1 (arc position c/2); edge 0 runs 0 -> 1 and edge 1 runs 1 -> 0, both
/// of length c/2. Throws ValidationError when c < 2*pi.
ConeSpace kale(double circumference);

/// Link point at arc position `a` (taken mod c) on kale(c).
GraphPoint kale_point(double circumference, double a);

/// Planar sector of the given opening angle: vertices 0, 1 and edge 0.
ConeSpace sector(double opening);

/// R^s with empty link.
ConeSpace euclidean(int s);

/// R^s x Cone(G), validated.
ConeSpace cone_over(MetricGraph link, int s = 0);

/// Two vertices 0, 1 joined by three parallel edges 0, 1, 2 (0 -> 1) of the
/// given lengths.
MetricGraph theta_graph(double l0, double l1, double l2);

}  // namespace strata::gallery
