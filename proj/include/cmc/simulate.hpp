#pragma once

#include <cstdint>
#include <vector>

#include "cmc/model.hpp"

namespace cmc {

struct JumpEvent {
    double time;
    std::int32_t to;
};

/// Simulated sample paths along the scenario, with aggregate transition
/// counts and occupation times over [0, T]. Paths are piecewise constant and
/// right-continuous; `events` holds the jumps of each path in increasing
/// time order.
struct PathBundle {
    std::uint64_t seed = 0;
    int dim = 0;
    TimeGrid grid{std::vector<double>{0.0, 1.0}};
    std::vector<std::int32_t> initial_states;     // per path
    std::vector<std::vector<JumpEvent>> events;   // per path
    Matrix transition_counts;                     // (x,y) jumps over [0, T]
    Vector occupation;                            // time spent per state over [0, T]

    std::size_t num_paths() const { return initial_states.size(); }
    double horizon() const { return grid.horizon(); }

    int state_at(std::size_t path, double t) const;

    /// Sanity checks: event times strictly increasing within [0, T],
    /// nonnegative aggregates, total occupation = n_paths * T.
    void validate() const;
};

/// Exact simulation of the model: within each piecewise-constant cell the
/// holding time is exponential truncated at the cell boundary and the jump
/// target is categorical on the off-diagonal row. Deterministic given
/// (seed, n_paths); the OpenMP variant produces the identical bundle for any
/// worker count.
PathBundle simulate(const CmcModel& model, std::size_t n_paths, std::uint64_t seed);

/// Serial reference implementation, kept for testing and benchmarking
/// against the parallel kernel.
PathBundle simulate_reference(const CmcModel& model, std::size_t n_paths,
                              std::uint64_t seed);

/// CSV export, one line per (path, event) with the initial state at time 0.
void export_paths_csv(const PathBundle& bundle, const std::string& file);

}  // namespace cmc
