#pragma once

#include "strata/devissage.hpp"
#include "strata/harness/config.hpp"

namespace strata::harness {

Json to_json(const GraphPoint& g);
Json to_json(const Point& p);
Json to_json(const StratumId& s);
Json to_json(const ConeSpace& X);
Json to_json(const DiscreteMeasure& mu);
Json to_json(const MeanReport& r);
Json to_json(const SubgraphRegion& region);
Json to_json(const ConvexCone& C);
Json to_json(const EscapeSections& E);
Json to_json(const LimitStage& stage);
Json to_json(const DevissageTrace& trace);
Json to_json(const PropertyCheck& c);

}  // namespace strata::harness
