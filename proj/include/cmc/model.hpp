#pragma once

#include <functional>
#include <vector>

#include "cmc/generator.hpp"
#include "cmc/state_space.hpp"
#include "cmc/time_grid.hpp"

namespace cmc {

/// One realized path of the driving factor process. All conditional
/// quantities in this library are deterministic along a fixed scenario;
/// expectations over the factor average over a set of scenarios outside the
/// library. `values` holds one factor vector per grid point and may be empty
/// when the intensities do not depend on a factor.
struct FactorScenario {
    TimeGrid grid;
    std::vector<Vector> values;

    explicit FactorScenario(TimeGrid g) : grid(std::move(g)) {}
    FactorScenario(TimeGrid g, std::vector<Vector> v);

    const Vector& value_at(std::size_t grid_index) const;
};

/// Piecewise-constant intensity matrix along a scenario: one generator per
/// grid cell. Cell i applies on [t_i, t_{i+1}).
class GeneratorPath {
public:
    GeneratorPath(FactorScenario scenario, std::vector<Matrix> cells,
                  double tol = kStructuralTol);

    static GeneratorPath constant(const TimeGrid& grid, const Matrix& G,
                                  double tol = kStructuralTol);

    /// Builds cells from a rule evaluated at each cell's midpoint with the
    /// factor value at the cell's left endpoint (the information available
    /// when the cell starts).
    static GeneratorPath from_rule(
        FactorScenario scenario,
        const std::function<Matrix(double t_mid, const Vector& factor)>& rule,
        double tol = kStructuralTol);

    const TimeGrid& grid() const { return scenario_.grid; }
    const FactorScenario& scenario() const { return scenario_; }
    std::size_t num_cells() const { return cells_.size(); }
    const Matrix& cell(std::size_t i) const { return cells_[i]; }
    const std::vector<Matrix>& cells() const { return cells_; }
    Eigen::Index dim() const { return cells_.front().rows(); }
    const Matrix& at(double t) const { return cells_[grid().locate(t)]; }

    /// sum over cells of length * max |diagonal| — finite by construction,
    /// exposed so callers can assert integrability.
    double total_activity() const;

    double max_rate() const;

private:
    FactorScenario scenario_;
    std::vector<Matrix> cells_;
};

/// Scenario-independent initial distribution over the flat state space.
struct InitialLaw {
    Vector probs;

    explicit InitialLaw(Vector p, double tol = kStructuralTol);
    static InitialLaw point_mass(int dim, int state);
    int dim() const { return static_cast<int>(probs.size()); }
};

/// One fully specified conditional Markov chain: product state space,
/// generator path along its scenario, and initial law.
struct CmcModel {
    ProductStateSpace space;
    GeneratorPath generator;
    InitialLaw initial;

    CmcModel(ProductStateSpace s, GeneratorPath g, InitialLaw i);

    const TimeGrid& grid() const { return generator.grid(); }
    int dim() const { return space.dim(); }
};

}  // namespace cmc
