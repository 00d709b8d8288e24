#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "nlocal/persistency.hpp"

namespace nlocal {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One batch invocation: a command, its JSON config document, and the
/// output sink. Flag overrides (seed, n_cap, margin, grid_step) take
/// precedence over the config file.
struct RunConfig {
  std::string command;  // detect | persistency | sweep | verify | table1
  std::string input;    // config path; verify runs with defaults if empty
  std::string output;   // report path; stdout if empty
  std::string format = "json";  // json | csv
  std::optional<std::uint64_t> seed;
  std::optional<long> n_cap;
  std::optional<double> margin;
  std::optional<double> grid_step;
};

/// Exit codes: 0 success, 1 failed check suite, 2 config error,
/// 3 resource-cap error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;

/// Runs one command; the report document goes to `out` (or the file named
/// by cfg.output), diagnostics to `diag`. Returns the exit code.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& diag);

}  // namespace nlocal
