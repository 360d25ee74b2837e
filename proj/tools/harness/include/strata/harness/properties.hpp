#pragma once

// Property suite run per fixture by `strata verify` and the acceptance
// binary. Every check carries the module it belongs to and, where it backs an
// acceptance criterion, that criterion's number.

#include <cstdint>
#include <string>
#include <vector>

#include "strata/devissage.hpp"
#include "strata/harness/fixtures.hpp"

namespace strata::harness {

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t contraction_samples = 1000;
  std::size_t pair_samples = 200;
  std::size_t gradient_samples = 120;
  std::size_t convexity_samples = 1000;
  double oracle_step = 1e-3;
  bool oracle = true;
};

struct PropertyResult {
  std::string module;
  /// Acceptance criterion backed by this check, 0 for none.
  int criterion = 0;
  PropertyCheck check;
};

struct FixtureReport {
  std::string fixture;
  std::vector<PropertyResult> results;

  bool all_pass() const;
};

FixtureReport run_fixture_suite(const std::string& name, const ExperimentConfig& cfg,
                                const SuiteOptions& options);

/// Fixtures fan out over at most `threads` workers; the result order follows
/// the input order regardless of scheduling.
std::vector<FixtureReport> run_suite(const std::vector<Fixture>& fixtures, const SuiteOptions& options,
                                     unsigned threads);

/// Number of connected pieces of a link region.
std::size_t region_components(const MetricGraph& g, const SubgraphRegion& region);

}  // namespace strata::harness
