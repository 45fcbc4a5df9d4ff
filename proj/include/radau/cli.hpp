#pragma once

#include <string>
#include <vector>

#include "radau/config.hpp"

namespace radau {

// Exit codes: 0 success, 2 configuration error, 3 numerical error,
// 4 training abort.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_error = 3;
inline constexpr int exit_training_abort = 4;

// Runs one resolved configuration and writes all artifacts (plus
// manifest.json) under cfg.out. Never writes elsewhere.
int dispatch(const RunConfig& cfg);

// Full command-line entry: parses subcommand + flags (+ optional config
// file), then dispatches.
int run_cli(const std::vector<std::string>& args);

}  // namespace radau
