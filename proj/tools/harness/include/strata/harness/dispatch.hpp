#pragma once

// Command dispatch for the `strata` CLI. Reports are JSON documents
//   {"command", "config", "config_hash", "version", "seed", "result" | "error"}
// with no timing data, so identical inputs give byte-identical output.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "strata/harness/config.hpp"

namespace strata::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

const std::vector<std::string>& command_names();

struct CommandOptions {
  std::string command;
  /// Optional for `verify` only.
  std::optional<std::filesystem::path> config;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool oracle = false;
  std::optional<std::filesystem::path> csv;
  /// Worker cap for `verify`.
  unsigned threads = 1;
};

struct RunReport {
  Json document;
  int exit_code = kExitOk;
  /// Atom table written behind --csv; empty when the command has none.
  std::string csv;
};

/// Never throws for user errors: they become exit code 1 (validation) or 2
/// (numerical failure) with an "error" entry in the document.
RunReport dispatch(const CommandOptions& options);

/// Worker count for `verify`: hardware concurrency capped by STRATA_THREADS.
unsigned default_threads();

std::string version_string();

}  // namespace strata::harness
