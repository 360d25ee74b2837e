#include "link_profile.hpp"

#include <algorithm>
#include <cmath>

namespace strata::detail {
namespace {

struct Line {
  double slope;  // +1 or -1
  double offset;
  double at(double t) const { return slope * t + offset; }
};

}  // namespace

double SinusoidPiece::eval(double t) const { return A * std::cos(t) + B * std::sin(t) + C; }

double support_value(const MetricGraph& G, const std::vector<WeightedLinkPoint>& pts,
                     const GraphPoint& g) {
  double h = 0.0;
  for (const auto& p : pts) h += p.c * std::cos(angular_distance(G, g, p.g));
  return h;
}

std::vector<SinusoidPiece> edge_profile(const MetricGraph& G, EdgeId e,
                                        const std::vector<WeightedLinkPoint>& pts) {
  const Edge& ed = G.edge(e);
  const double L = ed.length;

  std::vector<std::vector<Line>> lines(pts.size());
  std::vector<double> cuts{0.0, L};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const GraphPoint& gi = pts[i].g;
    const double dA = G.vertex_to_point(ed.from, gi);
    const double dB = G.vertex_to_point(ed.to, gi);
    if (std::isfinite(dA)) lines[i].push_back({1.0, dA});
    if (std::isfinite(dB)) lines[i].push_back({-1.0, L + dB});
    std::vector<Line> li = lines[i];
    if (!gi.is_vertex() && gi.edge_id() == e) {
      li.push_back({1.0, -gi.t()});
      li.push_back({-1.0, gi.t()});
      cuts.push_back(gi.t());
    }
    for (std::size_t a = 0; a < li.size(); ++a) {
      cuts.push_back((kPi - li[a].offset) / li[a].slope);
      for (std::size_t b = a + 1; b < li.size(); ++b) {
        if (li[a].slope != li[b].slope) {
          cuts.push_back((li[b].offset - li[a].offset) / (li[a].slope - li[b].slope));
        }
      }
    }
  }
  std::vector<double> ts;
  for (double t : cuts) {
    if (t >= 0.0 && t <= L) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double x, double y) { return std::abs(x - y) <= 1e-14; }),
           ts.end());

  std::vector<SinusoidPiece> pieces;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    SinusoidPiece piece{ts[k], ts[k + 1], 0.0, 0.0, 0.0};
    const double mid = 0.5 * (piece.a + piece.b);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<Line> cand = lines[i];
      const GraphPoint& gi = pts[i].g;
      if (!gi.is_vertex() && gi.edge_id() == e) {
        cand.push_back(mid >= gi.t() ? Line{1.0, -gi.t()} : Line{-1.0, gi.t()});
      }
      const Line* best = nullptr;
      for (const Line& l : cand) {
        if (!best || l.at(mid) < best->at(mid)) best = &l;
      }
      if (!best || best->at(mid) >= kPi) {
        piece.C -= pts[i].c;
        continue;
      }
      // cos(s t + c) = cos c cos t - s sin c sin t for s = +-1.
      piece.A += pts[i].c * std::cos(best->offset);
      piece.B -= pts[i].c * best->slope * std::sin(best->offset);
    }
    pieces.push_back(piece);
  }
  return pieces;
}

std::vector<double> piece_max_candidates(const SinusoidPiece& piece) {
  std::vector<double> out{piece.a, piece.b};
  if (piece.A == 0.0 && piece.B == 0.0) return out;
  const double phi = std::atan2(piece.B, piece.A);
  const double two_pi = 2.0 * kPi;
  const double k0 = std::ceil((piece.a - phi) / two_pi);
  for (double k = k0; phi + k * two_pi <= piece.b; k += 1.0) out.push_back(phi + k * two_pi);
  return out;
}

}  // namespace strata::detail
