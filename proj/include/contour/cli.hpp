#pragma once

#include <string>
#include <vector>

namespace contour {

// One row per subcommand with the module operations it exposes; backs the
// coverage test that every operation is reachable from exactly one place.
struct cli_command {
    std::string path;
    std::vector<std::string> operations;
};

const std::vector<cli_command>& cli_command_table();

// Exit codes: 0 success, 1 usage or I/O or config, 2 verification reject,
// 3 staleness alarm.
int run_cli(int argc, const char* const* argv);

} // namespace contour
