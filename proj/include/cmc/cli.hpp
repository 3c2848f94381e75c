#pragma once

#include <cstdint>
#include <string>

namespace cmc {

/// Parsed command line. `command` is one of validate | solve | check |
/// build | simulate | price | reproduce.
struct RunConfig {
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 42;
    std::size_t paths = 100000;
    double tol = 1e-9;
    bool export_paths = false;
};

/// Executes the command; returns the process exit code:
/// 0 success, 1 verdict failure, 2 usage or parse error.
int run(const RunConfig& config);

}  // namespace cmc
