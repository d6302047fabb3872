#pragma once

#include <cstdint>
#include <string>

namespace oscint::cli {

// Exit codes used by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;

// Runs one subcommand (integrate | bound | verify | decay | propagate |
// localize | kg-demo) against a JSON config, writing results under out_dir.
// Returns the exit status; error text goes to stderr.
int run_command(const std::string& command, const std::string& config_path,
                const std::string& out_dir, int workers, std::uint64_t seed);

} // namespace oscint::cli
