#include "cmc/time_grid.hpp"

#include <algorithm>
#include <cmath>

#include "cmc/errors.hpp"

namespace cmc {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2)
        throw Error("time grid needs at least two points");
    if (points_.front() != 0.0)
        throw Error("time grid must start at 0");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
        if (!(points_[i] < points_[i + 1]))
            throw Error("time grid must be strictly increasing");
    }
    for (double t : points_) {
        if (!std::isfinite(t))
            throw Error("time grid contains non-finite point");
    }
}

TimeGrid TimeGrid::uniform(double horizon, double step) {
    if (!(horizon > 0.0) || !(step > 0.0))
        throw Error("horizon and step must be positive");
    const auto n = static_cast<std::size_t>(std::llround(horizon / step));
    if (n < 1 || std::abs(n * step - horizon) > 1e-9 * horizon)
        throw Error("step does not divide horizon");
    std::vector<double> pts(n + 1);
    // i*horizon/n is correctly rounded, so points agree with the literals a
    // user would write for the same grid
    for (std::size_t i = 0; i <= n; ++i)
        pts[i] = static_cast<double>(i) * horizon / static_cast<double>(n);
    pts.back() = horizon;
    return TimeGrid(std::move(pts));
}

std::size_t TimeGrid::locate(double t) const {
    if (t < points_.front() || t > points_.back())
        throw OutOfRange("time " + std::to_string(t) + " outside grid");
    if (t >= points_[points_.size() - 2])
        return points_.size() - 2;
    auto it = std::upper_bound(points_.begin(), points_.end(), t);
    return static_cast<std::size_t>(it - points_.begin()) - 1;
}

bool TimeGrid::on_grid(double t) const {
    return std::binary_search(points_.begin(), points_.end(), t);
}

PiecewisePath::PiecewisePath(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.num_cells())
        throw DimensionMismatch("piecewise path needs one value per grid cell");
    for (double v : values_) {
        if (!std::isfinite(v))
            throw Error("piecewise path contains non-finite value");
    }
}

PiecewisePath PiecewisePath::constant(const TimeGrid& grid, double value) {
    return PiecewisePath(grid, std::vector<double>(grid.num_cells(), value));
}

double PiecewisePath::integral(double s, double t) const {
    if (s > t)
        throw OutOfRange("integral requires s <= t");
    if (s == t)
        return 0.0;
    std::size_t cs = grid_.locate(s);
    std::size_t ct = grid_.locate(t);
    if (cs == ct)
        return values_[cs] * (t - s);
    double acc = values_[cs] * (grid_.point(cs + 1) - s);
    for (std::size_t i = cs + 1; i < ct; ++i)
        acc += values_[i] * grid_.cell_length(i);
    acc += values_[ct] * (t - grid_.point(ct));
    return acc;
}

}  // namespace cmc
