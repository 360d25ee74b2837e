#pragma once

// The bundled fixture configs (configs/fixtures/*.json), compiled into the
// binary so `strata verify` runs without a config path.

#include <string>
#include <vector>

#include "strata/harness/config.hpp"

namespace strata::harness {

struct Fixture {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

/// All bundled fixtures, sorted by name.
const std::vector<Fixture>& bundled_fixtures();

/// Throws std::out_of_range for unknown names.
const Fixture& bundled_fixture(const std::string& name);

}  // namespace strata::harness
