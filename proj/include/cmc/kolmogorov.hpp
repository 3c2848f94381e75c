#pragma once

#include <optional>
#include <vector>

#include "cmc/model.hpp"

namespace cmc {

/// Default tolerance for transition/ODE checks.
inline constexpr double kOdeTol = 1e-8;

enum class PropagatorMethod {
    MatrixExponential,  // exact for piecewise-constant generators
    BackwardRk4,        // independent route via the backward equation
};

/// Conditional transition probability matrices P(s,t) for grid pairs s <= t,
/// represented by one propagator per grid cell; P between grid points is the
/// ordered product of cell propagators, off-grid times split the containing
/// cell exactly. Every row is propagated regardless of reachability, so rows
/// of unreachable states are still valid stochastic rows.
class TransitionField {
public:
    TransitionField(GeneratorPath generator, std::vector<Matrix> cell_props,
                    PropagatorMethod method);

    const TimeGrid& grid() const { return generator_.grid(); }
    Eigen::Index dim() const { return generator_.dim(); }
    PropagatorMethod method() const { return method_; }
    const Matrix& cell_propagator(std::size_t i) const { return cells_[i]; }

    /// P(t_i, t_j) for grid indices i <= j.
    Matrix between(std::size_t i, std::size_t j) const;

    /// P(s, t) for arbitrary 0 <= s <= t <= T.
    Matrix at(double s, double t) const;

    /// Asserts row-stochasticity, P(s,s) = I, and the Chapman-Kolmogorov
    /// composition over grid triples. Throws on violation.
    void validate(double row_tol = 1e-10, double ck_tol = kOdeTol) const;

private:
    Matrix partial(std::size_t cell, double from, double to) const;

    GeneratorPath generator_;
    std::vector<Matrix> cells_;
    PropagatorMethod method_;
};

/// P(X_t = x | F_t) along the scenario, one probability vector per grid
/// point. Entries are clipped at zero; each vector sums to one within 1e-10.
struct StateDistributionPath {
    TimeGrid grid;
    std::vector<Vector> values;

    const Vector& at_index(std::size_t i) const { return values[i]; }
};

/// Solves the forward equation dP(v,t) = P(v,t) L_t dt with per-cell matrix
/// exponentials.
TransitionField solve_forward(const CmcModel& model);

/// Solves the backward equation dP(v,t) = -L_v P(v,t) dv by RK4 integration
/// inside each cell. Agrees with solve_forward within kOdeTol; kept as an
/// independent numerical route.
TransitionField solve_backward(const CmcModel& model);

StateDistributionPath state_distribution(const CmcModel& model);

/// Distribution at an arbitrary time (splits the containing cell).
Vector state_distribution_at(const CmcModel& model, double t);

/// One distribution per grid cell, evaluated at the cell midpoint. Used for
/// support detection of piecewise-constant data.
std::vector<Vector> cell_midpoint_distributions(const CmcModel& model);

/// The two-component absorbing field with a common-jump channel, in closed
/// form: rows over states (0,0),(0,1),(1,0),(1,1) are
///   [delta, alpha, beta, gamma]
///   [0, e^{-int a}, 0, 1 - e^{-int a}]
///   [0, 0, e^{-int b}, 1 - e^{-int b}]
///   [0, 0, 0, 1]
/// with delta = e^{-int (a+b+c)}, alpha/beta the one-jump integrals and
/// gamma the complement. Integrals are evaluated exactly per cell.
Matrix closed_form_weak_only(const PiecewisePath& a, const PiecewisePath& b,
                             const PiecewisePath& c, double s, double t);

/// alpha(s,t) = e^{-int_s^t a} int_s^t b_u e^{-int_s^u (b+c)} du, exact for
/// piecewise-constant paths. beta(s,t) is alpha with the roles of a and b
/// swapped.
double weak_only_alpha(const PiecewisePath& a, const PiecewisePath& b,
                       const PiecewisePath& c, double s, double t);

/// Row aggregation of a transition matrix onto component k: entry (x, y^k)
/// is the probability of moving from full state x into any state whose k-th
/// coordinate is y^k. Result is dim x |S_k|.
Matrix marginal_aggregate(const Matrix& P, const ProductStateSpace& space, int k);

/// If the aggregate is independent of the non-k coordinates (within tol),
/// returns the collapsed |S_k| x |S_k| component transition matrix.
std::optional<Matrix> collapse_marginal(const Matrix& aggregate,
                                        const ProductStateSpace& space, int k,
                                        double tol);

/// Component-k view of a whole field. `aggregates[i][j-i]` is the
/// row-aggregated matrix for the grid pair (t_i, t_j). When every aggregate
/// is independent of the non-k coordinates the collapsed component field is
/// returned alongside (Kronecker-product fields always collapse).
struct MarginalFieldAggregate {
    int component;
    std::vector<std::vector<Matrix>> aggregates;
    std::optional<std::vector<std::vector<Matrix>>> component_field;
};

MarginalFieldAggregate marginal_transition_field(const TransitionField& field,
                                                 const ProductStateSpace& space, int k,
                                                 double tol = 1e-9);

}  // namespace cmc
