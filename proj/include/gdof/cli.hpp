#pragma once

#include "gdof/rational.hpp"
#include "gdof/table.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gdof::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCounterexample = 1;
inline constexpr int kExitConfig = 2;

inline constexpr const char* kDefaultGrid = "0:3:3/32";

// Effective configuration after defaults, config file and flags are merged.
struct RunConfig {
    std::string command;  // curve | simulate | verify | sweep
    int users = 3;
    std::uint32_t base = 64;
    int levels = 8;
    std::string alpha;       // single point; takes precedence over the grid
    std::string alpha_grid;  // "lo:hi:step" or "a,b,c"
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::string out;         // empty: standard output
    std::string format = "csv";
    bool zero_noise = false;
    std::uint64_t cap = 1'000'000;
    bool measured = false;   // sweep/simulate d_empirical from the measured rate
    int threads = 1;
    bool corrupt_copy_map = false;  // verify fault-injection hook
};

/// "lo:hi:step" (inclusive, exact) or a comma separated list of values.
std::vector<Rational> parse_alpha_grid(const std::string& text);

/// Alpha values the command runs over: --alpha, else --alpha-grid, else the
/// default grid.
std::vector<Rational> alpha_values(const RunConfig& config);

/// Checks the channel preconditions shared by every command; throws
/// gdof::Error naming the violated one.
void validate(const RunConfig& config);

Table cmd_curve(const RunConfig& config);
Table cmd_simulate(const RunConfig& config, std::ostream& diag);
Table cmd_verify(const RunConfig& config, bool& counterexample, std::ostream& diag);
Table cmd_sweep(const RunConfig& config);

/// Full front end: parses args (without the program name), runs the command,
/// writes the table. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace gdof::cli
