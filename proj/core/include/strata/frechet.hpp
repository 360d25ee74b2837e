#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "strata/cone_space.hpp"

namespace strata {

struct Atom {
  Point point;
  double weight = 0.0;
};

/// Finitely many weighted atoms. Weights are positive and sum to one within
/// kWeightSumTol; the constructor throws ValidationError otherwise.
class DiscreteMeasure {
 public:
  static constexpr double kWeightSumTol = 1e-12;

  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  static DiscreteMeasure dirac(Point p) { return DiscreteMeasure({Atom{std::move(p), 1.0}}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  /// Throws InvalidPointError if an atom does not belong to X.
  void check(const ConeSpace& X) const;

 private:
  std::vector<Atom> atoms_;
};

double half_square_distance(const ConeSpace& X, const Point& w, const Point& p);

/// F(p) = 1/2 sum_i w_i d(p, x_i)^2.
double frechet_value(const ConeSpace& X, const DiscreteMeasure& mu, const Point& p);

struct MeanCandidate {
  StratumId stratum;
  Point point;
  double value = 0.0;
};

struct MeanReport {
  Point mean;
  double value = 0.0;
  StratumId stratum;
  /// Best point in the closure of each stratum, ordered by (value, stratum).
  std::vector<MeanCandidate> candidates;
  bool punctual = true;
  bool retractable = true;
  std::vector<std::size_t> ambiguous_atoms;
  /// Smallest directional derivative over the first-order direction sample;
  /// not computed (0) when the measure is not retractable.
  double min_directional_derivative = 0.0;
};

/// Exact Frechet mean. The spine part is the weighted average of the atom
/// spine coordinates; the cone part maximizes
///   h(g) = sum_i w_i r_i cos(min(d(g, g_i), pi))
/// over the link, and the mean is (g*, h(g*)) when h(g*) > 0 and the apex
/// otherwise. Throws NumericalFailure if the first-order check fails.
MeanReport frechet_mean(const ConeSpace& X, const DiscreteMeasure& mu);

/// Brute-force grid minimizer over link parameter, radius and spine box.
/// Only meant for tests.
Point frechet_mean_oracle(const ConeSpace& X, const DiscreteMeasure& mu, double grid_step);

/// Directional derivative of F at p along V in the tangent cone at p:
///   -sum_i w_i <log_p x_i, V>.
/// Throws CutLocusError listing atoms whose log at p is not unique.
double directional_derivative(const ConeSpace& X, const DiscreteMeasure& mu, const Point& p,
                              const TangentVector& V);

/// The tangent cone at p and the measure of log_p x_i with the same weights.
std::pair<ConeSpace, DiscreteMeasure> pushforward_to_tangent(const ConeSpace& X,
                                                             const DiscreteMeasure& mu,
                                                             const Point& p);

struct LocalizationReport {
  bool punctual = true;
  bool retractable = true;
  std::vector<std::size_t> ambiguous_atoms;
  Point mean;
};

LocalizationReport check_localized(const ConeSpace& X, const DiscreteMeasure& mu);

/// h(g) for the cone part of mu; exposed for cones and tests.
double link_support_function(const ConeSpace& X, const DiscreteMeasure& mu, const GraphPoint& g);

struct LinkMaximum {
  GraphPoint point;
  double value = 0.0;
};

/// Global maximum of link_support_function over the link, or nullopt when
/// the link is empty. Ties are broken by the smallest (vertex, edge, t).
std::optional<LinkMaximum> maximize_link_support(const ConeSpace& X, const DiscreteMeasure& mu);

/// Unit directions used for first-order checks in the tangent cone T:
/// +-spine axes, each link vertex, and a few deterministic mixtures.
std::vector<TangentVector> direction_sample(const ConeSpace& T);

}  // namespace strata
