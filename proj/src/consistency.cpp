#include "cmc/consistency.hpp"

#include <cmath>

#include "cmc/errors.hpp"

namespace cmc {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "not-applicable";
    }
}

bool ConsistencyReport::passed() const {
    return algebraic_strong != Verdict::Fail && strong != Verdict::Fail &&
           weak_necessary != Verdict::Fail;
}

namespace {

// Aggregated rate out of full state x into component-k target y_k:
// sum over all full states y whose k-th coordinate is y_k. x itself never
// contributes because callers only use x^k != y^k.
double aggregate_rate(const Matrix& L, const ProductStateSpace& space, int k, int x,
                      int y_k) {
    double acc = 0.0;
    for (int y : space.slice(k, y_k))
        acc += L(x, y);
    return acc;
}

// Completes a marginal cell matrix from its off-diagonal entries.
Matrix finish_cell(Matrix M) {
    complete_diagonal(M);
    return M;
}

}  // namespace

ConsistencyReport check_asm(const CmcModel& model, int k, double tol) {
    const ProductStateSpace& space = model.space;
    const int sk = space.component_size(k);
    ConsistencyReport report;
    report.component = k;
    report.algebraic_strong = Verdict::Pass;

    std::vector<Matrix> marginal_cells;
    marginal_cells.reserve(model.generator.num_cells());

    for (std::size_t cell = 0; cell < model.generator.num_cells(); ++cell) {
        const Matrix& L = model.generator.cell(cell);
        Matrix M = Matrix::Zero(sk, sk);
        for (int xk = 0; xk < sk; ++xk) {
            const std::vector<int> states = space.slice(k, xk);
            for (int yk = 0; yk < sk; ++yk) {
                if (yk == xk)
                    continue;
                const double ref = aggregate_rate(L, space, k, states.front(), yk);
                for (int x : states) {
                    const double v = aggregate_rate(L, space, k, x, yk);
                    if (std::abs(v - ref) > tol) {
                        report.algebraic_strong = Verdict::Fail;
                        report.witnesses.push_back({cell, x, states.front(), yk, v, ref});
                    }
                }
                M(xk, yk) = ref;
            }
        }
        marginal_cells.push_back(finish_cell(std::move(M)));
    }

    if (report.algebraic_strong == Verdict::Pass)
        report.marginal = MarginalIntensityPath{k, model.grid(), std::move(marginal_cells)};
    return report;
}

ConsistencyReport check_sm(const CmcModel& model, int k, double tol, double support_eps) {
    const ProductStateSpace& space = model.space;
    const int sk = space.component_size(k);
    const std::vector<Vector> mids = cell_midpoint_distributions(model);

    ConsistencyReport report;
    report.component = k;
    report.strong = Verdict::Pass;

    std::vector<Matrix> marginal_cells;
    marginal_cells.reserve(model.generator.num_cells());

    for (std::size_t cell = 0; cell < model.generator.num_cells(); ++cell) {
        const Matrix& L = model.generator.cell(cell);
        const Vector& pi = mids[cell];
        Matrix M = Matrix::Zero(sk, sk);
        for (int xk = 0; xk < sk; ++xk) {
            const std::vector<int> all_states = space.slice(k, xk);
            std::vector<int> support;
            for (int x : all_states)
                if (pi[x] > support_eps)
                    support.push_back(x);
            // Off-support component states carry no information about the
            // marginal; fall back to the version-level agreement so the
            // certified marginal is still well defined for them.
            const std::vector<int>& compare = support.empty() ? all_states : support;
            for (int yk = 0; yk < sk; ++yk) {
                if (yk == xk)
                    continue;
                const double ref = aggregate_rate(L, space, k, compare.front(), yk);
                for (int x : compare) {
                    const double v = aggregate_rate(L, space, k, x, yk);
                    if (std::abs(v - ref) > tol) {
                        report.strong = Verdict::Fail;
                        report.witnesses.push_back({cell, x, compare.front(), yk, v, ref});
                    }
                }
                M(xk, yk) = ref;
            }
        }
        marginal_cells.push_back(finish_cell(std::move(M)));
    }

    if (report.strong == Verdict::Pass)
        report.marginal = MarginalIntensityPath{k, model.grid(), std::move(marginal_cells)};
    return report;
}

MarginalIntensityPath extract_strong_marginal(const CmcModel& model, int k, double tol) {
    ConsistencyReport report = check_asm(model, k, tol);
    if (report.algebraic_strong != Verdict::Pass)
        throw AsmViolated("aggregated rates depend on the other coordinates for component " +
                          std::to_string(k));
    return std::move(*report.marginal);
}

MarginalIntensityPath weak_marginal_intensity(const CmcModel& model, int k,
                                              double support_eps) {
    const ProductStateSpace& space = model.space;
    const int sk = space.component_size(k);
    const std::vector<Vector> mids = cell_midpoint_distributions(model);

    std::vector<Matrix> cells;
    cells.reserve(model.generator.num_cells());
    for (std::size_t cell = 0; cell < model.generator.num_cells(); ++cell) {
        const Matrix& L = model.generator.cell(cell);
        const Vector& pi = mids[cell];
        Matrix M = Matrix::Zero(sk, sk);
        for (int xk = 0; xk < sk; ++xk) {
            const std::vector<int> states = space.slice(k, xk);
            double pk = 0.0;
            for (int x : states)
                pk += pi[x];
            if (pk <= support_eps)
                throw SupportViolation(model.grid().cell_midpoint(cell), k, xk);
            for (int yk = 0; yk < sk; ++yk) {
                if (yk == xk)
                    continue;
                double acc = 0.0;
                for (int x : states)
                    acc += aggregate_rate(L, space, k, x, yk) * pi[x];
                M(xk, yk) = acc / pk;
            }
        }
        cells.push_back(finish_cell(std::move(M)));
    }
    return MarginalIntensityPath{k, model.grid(), std::move(cells)};
}

std::vector<std::size_t> all_grid_indices(const TimeGrid& grid) {
    std::vector<std::size_t> idx(grid.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    return idx;
}

WeakOnlyCertificate certify_weak_only(const CmcModel& model, int k,
                                      const std::vector<std::size_t>& s_indices,
                                      const std::vector<std::size_t>& t_indices,
                                      double tol, double support_eps) {
    WeakOnlyCertificate cert;
    try {
        weak_marginal_intensity(model, k, support_eps);
    } catch (const SupportViolation&) {
        return cert;  // no well-defined own-filtration intensity
    }

    const TransitionField field = solve_forward(model);
    const StateDistributionPath pi = state_distribution(model);
    const ProductStateSpace& space = model.space;

    for (std::size_t si : s_indices) {
        const Vector& pis = pi.at_index(si);
        for (std::size_t ti : t_indices) {
            if (ti <= si)
                continue;
            const Matrix agg = marginal_aggregate(field.between(si, ti), space, k);
            for (int xk = 0; xk < space.component_size(k); ++xk) {
                const std::vector<int> states = space.slice(k, xk);
                for (std::size_t a = 0; a < states.size(); ++a) {
                    if (pis[states[a]] <= support_eps)
                        continue;
                    for (std::size_t b = a + 1; b < states.size(); ++b) {
                        if (pis[states[b]] <= support_eps)
                            continue;
                        for (int yk = 0; yk < space.component_size(k); ++yk) {
                            const double lhs = agg(states[a], yk);
                            const double rhs = agg(states[b], yk);
                            if (std::abs(lhs - rhs) > tol) {
                                cert.certified = true;
                                cert.witness = Witness{si, states[a], states[b], yk, lhs, rhs};
                                cert.s = model.grid().point(si);
                                cert.t = model.grid().point(ti);
                                return cert;
                            }
                        }
                    }
                }
            }
        }
    }
    return cert;
}

LawMatchResult check_law_match(const MarginalIntensityPath& lhs, const Vector& lhs_initial,
                               const MarginalIntensityPath& rhs, const Vector& rhs_initial,
                               double tol) {
    if (lhs.dim() != rhs.dim() || lhs_initial.size() != rhs_initial.size() ||
        lhs_initial.size() != lhs.dim())
        throw DimensionMismatch("law comparison needs matching component spaces");
    if (lhs.cells.size() != rhs.cells.size())
        throw DimensionMismatch("law comparison needs matching grids");

    LawMatchResult res;
    for (std::size_t i = 0; i < lhs.cells.size(); ++i)
        res.max_intensity_gap = std::max(
            res.max_intensity_gap, (lhs.cells[i] - rhs.cells[i]).cwiseAbs().maxCoeff());
    res.max_initial_gap = (lhs_initial - rhs_initial).cwiseAbs().maxCoeff();
    res.pass = res.max_intensity_gap <= tol && res.max_initial_gap <= tol;
    return res;
}

}  // namespace cmc
