#include "cmc/model.hpp"

#include <cmath>

#include "cmc/errors.hpp"

namespace cmc {

FactorScenario::FactorScenario(TimeGrid g, std::vector<Vector> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!values.empty() && values.size() != grid.size())
        throw DimensionMismatch("scenario needs one factor value per grid point");
    for (const Vector& x : values)
        if (!x.allFinite())
            throw Error("scenario contains non-finite factor value");
}

const Vector& FactorScenario::value_at(std::size_t grid_index) const {
    if (values.empty())
        throw OutOfRange("scenario carries no factor values");
    return values.at(grid_index);
}

GeneratorPath::GeneratorPath(FactorScenario scenario, std::vector<Matrix> cells, double tol)
    : scenario_(std::move(scenario)), cells_(std::move(cells)) {
    if (cells_.size() != grid().num_cells())
        throw DimensionMismatch("generator path needs one matrix per grid cell");
    const Eigen::Index d = cells_.front().rows();
    for (const Matrix& c : cells_) {
        if (c.rows() != d || c.cols() != d)
            throw DimensionMismatch("generator cells must share one dimension");
        validate_generator(c, tol);
    }
}

GeneratorPath GeneratorPath::constant(const TimeGrid& grid, const Matrix& G, double tol) {
    return GeneratorPath(FactorScenario(grid),
                         std::vector<Matrix>(grid.num_cells(), G), tol);
}

GeneratorPath GeneratorPath::from_rule(
    FactorScenario scenario,
    const std::function<Matrix(double, const Vector&)>& rule, double tol) {
    std::vector<Matrix> cells;
    cells.reserve(scenario.grid.num_cells());
    const Vector none;
    for (std::size_t i = 0; i < scenario.grid.num_cells(); ++i) {
        const Vector& z = scenario.values.empty() ? none : scenario.values[i];
        cells.push_back(rule(scenario.grid.cell_midpoint(i), z));
    }
    return GeneratorPath(std::move(scenario), std::move(cells), tol);
}

double GeneratorPath::total_activity() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < cells_.size(); ++i)
        acc += grid().cell_length(i) * cells_[i].diagonal().cwiseAbs().maxCoeff();
    return acc;
}

double GeneratorPath::max_rate() const {
    double m = 0.0;
    for (const Matrix& c : cells_)
        m = std::max(m, c.diagonal().cwiseAbs().maxCoeff());
    return m;
}

InitialLaw::InitialLaw(Vector p, double tol) : probs(std::move(p)) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        if (!std::isfinite(probs[i]) || probs[i] < -tol)
            throw Error("initial law has negative or non-finite entry");
        if (probs[i] < 0.0)
            probs[i] = 0.0;
        sum += probs[i];
    }
    if (std::abs(sum - 1.0) > tol)
        throw Error("initial law does not sum to one, residual " + std::to_string(sum - 1.0));
}

InitialLaw InitialLaw::point_mass(int dim, int state) {
    Vector p = Vector::Zero(dim);
    p[state] = 1.0;
    return InitialLaw(std::move(p));
}

CmcModel::CmcModel(ProductStateSpace s, GeneratorPath g, InitialLaw i)
    : space(std::move(s)), generator(std::move(g)), initial(std::move(i)) {
    if (generator.dim() != space.dim() || initial.dim() != space.dim())
        throw DimensionMismatch("model dimensions disagree");
}

}  // namespace cmc
