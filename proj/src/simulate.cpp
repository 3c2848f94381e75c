#include "cmc/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "cmc/errors.hpp"
#include "cmc/parallel.hpp"
#include "cmc/rng.hpp"

namespace cmc {

int PathBundle::state_at(std::size_t path, double t) const {
    int state = initial_states[path];
    for (const JumpEvent& e : events[path]) {
        if (e.time > t)
            break;
        state = e.to;
    }
    return state;
}

void PathBundle::validate() const {
    const double T = horizon();
    for (std::size_t p = 0; p < num_paths(); ++p) {
        double last = 0.0;
        for (const JumpEvent& e : events[p]) {
            if (!(e.time > last) || e.time > T)
                throw Error("path " + std::to_string(p) + " has non-increasing event times");
            last = e.time;
        }
    }
    if (transition_counts.minCoeff() < 0.0 || occupation.minCoeff() < 0.0)
        throw Error("negative aggregate statistics");
    const double total = occupation.sum();
    if (std::abs(total - static_cast<double>(num_paths()) * T) >
        1e-9 * static_cast<double>(num_paths()) * T)
        throw Error("occupation times do not add up to n_paths * horizon");
}

namespace {

int draw_categorical(CounterRng& rng, const Matrix& L, int state, double exit_rate) {
    const double target = rng.uniform() * exit_rate;
    double acc = 0.0;
    const Eigen::Index d = L.rows();
    int last_positive = -1;
    for (Eigen::Index y = 0; y < d; ++y) {
        if (y == state)
            continue;
        const double w = L(state, y);
        if (w <= 0.0)
            continue;
        acc += w;
        last_positive = static_cast<int>(y);
        if (target < acc)
            return static_cast<int>(y);
    }
    return last_positive;  // guards against round-off at the right edge
}

int draw_initial(CounterRng& rng, const Vector& probs) {
    const double u = rng.uniform();
    double acc = 0.0;
    int last_positive = 0;
    for (Eigen::Index x = 0; x < probs.size(); ++x) {
        if (probs[x] <= 0.0)
            continue;
        acc += probs[x];
        last_positive = static_cast<int>(x);
        if (u < acc)
            return static_cast<int>(x);
    }
    return last_positive;
}

void simulate_one(const CmcModel& model, std::uint64_t seed, std::size_t path,
                  std::int32_t& initial, std::vector<JumpEvent>& events) {
    CounterRng rng(seed, path);
    const TimeGrid& grid = model.grid();
    int state = draw_initial(rng, model.initial.probs);
    initial = static_cast<std::int32_t>(state);
    events.clear();

    for (std::size_t cell = 0; cell < grid.num_cells(); ++cell) {
        const Matrix& L = model.generator.cell(cell);
        double t = grid.point(cell);
        const double t_end = grid.point(cell + 1);
        while (true) {
            const double exit_rate = -L(state, state);
            if (exit_rate <= 0.0)
                break;  // absorbing for this cell
            const double wait = rng.exponential(exit_rate);
            if (t + wait >= t_end)
                break;  // truncated at the cell boundary, memoryless restart
            t += wait;
            state = draw_categorical(rng, L, state, exit_rate);
            events.push_back({t, static_cast<std::int32_t>(state)});
        }
    }
}

// Ordered (path-major) reduction keeps aggregates identical across worker
// counts.
void aggregate(const CmcModel& model, PathBundle& bundle) {
    const int d = model.dim();
    bundle.transition_counts = Matrix::Zero(d, d);
    bundle.occupation = Vector::Zero(d);
    const double T = bundle.horizon();
    for (std::size_t p = 0; p < bundle.num_paths(); ++p) {
        int state = bundle.initial_states[p];
        double t = 0.0;
        for (const JumpEvent& e : bundle.events[p]) {
            bundle.transition_counts(state, e.to) += 1.0;
            bundle.occupation[state] += e.time - t;
            t = e.time;
            state = e.to;
        }
        bundle.occupation[state] += T - t;
    }
}

PathBundle run(const CmcModel& model, std::size_t n_paths, std::uint64_t seed,
               bool parallel) {
    if (n_paths < 1)
        throw InvalidSeedStream("need at least one path");
    PathBundle bundle;
    bundle.seed = seed;
    bundle.dim = model.dim();
    bundle.grid = model.grid();
    bundle.initial_states.resize(n_paths);
    bundle.events.resize(n_paths);

    const auto n = static_cast<std::ptrdiff_t>(n_paths);
    if (parallel) {
#pragma omp parallel for schedule(static) num_threads(thread_count())
        for (std::ptrdiff_t p = 0; p < n; ++p)
            simulate_one(model, seed, static_cast<std::size_t>(p),
                         bundle.initial_states[p], bundle.events[p]);
    } else {
        for (std::ptrdiff_t p = 0; p < n; ++p)
            simulate_one(model, seed, static_cast<std::size_t>(p),
                         bundle.initial_states[p], bundle.events[p]);
    }
    aggregate(model, bundle);
    return bundle;
}

}  // namespace

PathBundle simulate(const CmcModel& model, std::size_t n_paths, std::uint64_t seed) {
    return run(model, n_paths, seed, true);
}

PathBundle simulate_reference(const CmcModel& model, std::size_t n_paths,
                              std::uint64_t seed) {
    return run(model, n_paths, seed, false);
}

void export_paths_csv(const PathBundle& bundle, const std::string& file) {
    std::FILE* f = std::fopen(file.c_str(), "w");
    if (!f)
        throw Error("cannot open " + file);
    std::fprintf(f, "path_id,time,state\n");
    for (std::size_t p = 0; p < bundle.num_paths(); ++p) {
        std::fprintf(f, "%zu,%.17g,%d\n", p, 0.0, bundle.initial_states[p]);
        for (const JumpEvent& e : bundle.events[p])
            std::fprintf(f, "%zu,%.17g,%d\n", p, e.time, e.to);
    }
    std::fclose(f);
}

}  // namespace cmc
