#pragma once

#include <iosfwd>

#include "config.hpp"

namespace aicsel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;

/// Environment variable that makes oracle-check corrupt the block-engine
/// probabilities, so the failure path can be exercised.
inline constexpr const char* kOracleFaultEnv = "AICSEL_ORACLE_FAULT";

/// Validates, runs and persists one command. Returns the exit code for
/// outcomes the command itself decides (oracle mismatch); throws
/// ValidationError and library errors otherwise.
int run_command(const Config& config, std::ostream& out, std::ostream& log);

}  // namespace aicsel::cli
