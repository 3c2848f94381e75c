#pragma once

#include <cstddef>
#include <vector>

namespace cmc {

/// Strictly increasing time points t_0 = 0 < t_1 < ... < t_M = T (years).
/// Cell i is the interval [t_i, t_{i+1}); piecewise-constant data lives on
/// cells.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> points);

    static TimeGrid uniform(double horizon, double step);

    std::size_t size() const { return points_.size(); }
    std::size_t num_cells() const { return points_.size() - 1; }
    double point(std::size_t i) const { return points_[i]; }
    double horizon() const { return points_.back(); }
    double cell_length(std::size_t i) const { return points_[i + 1] - points_[i]; }
    double cell_midpoint(std::size_t i) const { return 0.5 * (points_[i] + points_[i + 1]); }
    const std::vector<double>& points() const { return points_; }

    /// Index of the cell containing t, i.e. the largest i with t_i <= t.
    /// t == horizon maps to the last cell.
    std::size_t locate(double t) const;

    /// True if t coincides with a grid point (exact comparison).
    bool on_grid(double t) const;

    bool operator==(const TimeGrid& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
};

/// One scalar value per grid cell (a piecewise-constant path such as a rate).
class PiecewisePath {
public:
    PiecewisePath(TimeGrid grid, std::vector<double> values);
    static PiecewisePath constant(const TimeGrid& grid, double value);

    const TimeGrid& grid() const { return grid_; }
    double cell(std::size_t i) const { return values_[i]; }
    std::size_t num_cells() const { return values_.size(); }
    double at(double t) const { return values_[grid_.locate(t)]; }

    /// Exact integral over [s, t] of the piecewise-constant path.
    double integral(double s, double t) const;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

}  // namespace cmc
