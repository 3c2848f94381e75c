#include "cmc/kolmogorov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

#include "cmc/errors.hpp"
#include "cmc/parallel.hpp"

namespace cmc {

namespace {

Matrix expm(const Matrix& G, double h) {
    Matrix P = (h * G).exp();
    if (!P.allFinite())
        throw NonFiniteEntries("propagator has non-finite entries");
    return P;
}

// RK4 on dQ/dv = -L Q, integrating v from the right end of the interval down
// to the left end; with Q(right) = I this yields the interval propagator.
// The step count keeps the global error well below the 1e-10 agreement
// budget for rates of a few per year.
Matrix backward_rk4(const Matrix& G, double h) {
    const double rate = std::max(1.0, G.diagonal().cwiseAbs().maxCoeff());
    const int steps = std::max(64, static_cast<int>(std::ceil(256.0 * h * rate)));
    const double dv = h / steps;
    const Eigen::Index d = G.rows();
    Matrix Q = Matrix::Identity(d, d);
    for (int i = 0; i < steps; ++i) {
        // dQ/dv = -L Q and we move in direction of decreasing v, so each
        // step applies +L Q with step dv.
        Matrix k1 = G * Q;
        Matrix k2 = G * (Q + 0.5 * dv * k1);
        Matrix k3 = G * (Q + 0.5 * dv * k2);
        Matrix k4 = G * (Q + dv * k3);
        Q += (dv / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!Q.allFinite())
        throw NonFiniteEntries("propagator has non-finite entries");
    return Q;
}

Matrix make_propagator(const Matrix& G, double h, PropagatorMethod m) {
    return m == PropagatorMethod::MatrixExponential ? expm(G, h) : backward_rk4(G, h);
}

}  // namespace

TransitionField::TransitionField(GeneratorPath generator, std::vector<Matrix> cell_props,
                                 PropagatorMethod method)
    : generator_(std::move(generator)), cells_(std::move(cell_props)), method_(method) {
    if (cells_.size() != generator_.num_cells())
        throw DimensionMismatch("transition field needs one propagator per cell");
}

Matrix TransitionField::between(std::size_t i, std::size_t j) const {
    if (i > j || j >= grid().size())
        throw OutOfRange("transition field indices out of range");
    Matrix P = Matrix::Identity(dim(), dim());
    for (std::size_t c = i; c < j; ++c)
        P = P * cells_[c];
    return P;
}

Matrix TransitionField::partial(std::size_t cell, double from, double to) const {
    if (from == to)
        return Matrix::Identity(dim(), dim());
    return make_propagator(generator_.cell(cell), to - from, method_);
}

Matrix TransitionField::at(double s, double t) const {
    if (s > t)
        throw OutOfRange("transition field requires s <= t");
    if (s == t)
        return Matrix::Identity(dim(), dim());
    const std::size_t cs = grid().locate(s);
    const std::size_t ct = grid().locate(t);
    if (cs == ct)
        return partial(cs, s, t);
    Matrix P = partial(cs, s, grid().point(cs + 1));
    P = P * between(cs + 1, ct);
    P = P * partial(ct, grid().point(ct), t);
    return P;
}

void TransitionField::validate(double row_tol, double ck_tol) const {
    const std::size_t m = grid().size();
    const Matrix I = Matrix::Identity(dim(), dim());
    std::vector<std::vector<Matrix>> table(m);
    for (std::size_t i = 0; i < m; ++i) {
        table[i].reserve(m - i);
        table[i].push_back(I);
        for (std::size_t j = i + 1; j < m; ++j)
            table[i].push_back(table[i].back() * cells_[j - 1]);
    }
    for (std::size_t i = 0; i < m; ++i) {
        if ((table[i][0] - I).cwiseAbs().maxCoeff() != 0.0)
            throw Error("P(s,s) differs from identity");
        for (std::size_t j = i; j < m; ++j) {
            const Matrix& P = table[i][j - i];
            for (Eigen::Index r = 0; r < P.rows(); ++r) {
                if (P.row(r).minCoeff() < -row_tol || std::abs(P.row(r).sum() - 1.0) > row_tol)
                    throw Error("transition matrix row " + std::to_string(r) +
                                " not stochastic at grid pair (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j)
            for (std::size_t k = j; k < m; ++k) {
                const double err =
                    (table[i][k - i] - table[i][j - i] * table[j][k - j])
                        .cwiseAbs()
                        .maxCoeff();
                if (err > ck_tol)
                    throw Error("Chapman-Kolmogorov violation " + std::to_string(err));
            }
}

namespace {

TransitionField solve(const CmcModel& model, PropagatorMethod method) {
    const GeneratorPath& gen = model.generator;
    std::vector<Matrix> props(gen.num_cells());
    const auto n = static_cast<std::ptrdiff_t>(gen.num_cells());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::ptrdiff_t i = 0; i < n; ++i)
        props[i] = make_propagator(gen.cell(i), gen.grid().cell_length(i), method);
    TransitionField field(gen, std::move(props), method);
    field.validate();
    return field;
}

}  // namespace

TransitionField solve_forward(const CmcModel& model) {
    return solve(model, PropagatorMethod::MatrixExponential);
}

TransitionField solve_backward(const CmcModel& model) {
    return solve(model, PropagatorMethod::BackwardRk4);
}

StateDistributionPath state_distribution(const CmcModel& model) {
    StateDistributionPath path{model.grid(), {}};
    path.values.reserve(model.grid().size());
    Vector pi = model.initial.probs;
    path.values.push_back(pi);
    for (std::size_t i = 0; i < model.grid().num_cells(); ++i) {
        const Matrix P = expm(model.generator.cell(i), model.grid().cell_length(i));
        pi = (pi.transpose() * P).transpose();
        pi = pi.cwiseMax(0.0);
        path.values.push_back(pi);
    }
    return path;
}

Vector state_distribution_at(const CmcModel& model, double t) {
    const std::size_t cell = model.grid().locate(t);
    Vector pi = model.initial.probs;
    for (std::size_t i = 0; i < cell; ++i)
        pi = (pi.transpose() * expm(model.generator.cell(i), model.grid().cell_length(i)))
                 .transpose();
    const double h = t - model.grid().point(cell);
    if (h > 0.0)
        pi = (pi.transpose() * expm(model.generator.cell(cell), h)).transpose();
    return pi.cwiseMax(0.0);
}

std::vector<Vector> cell_midpoint_distributions(const CmcModel& model) {
    std::vector<Vector> mids;
    mids.reserve(model.grid().num_cells());
    Vector pi = model.initial.probs;
    for (std::size_t i = 0; i < model.grid().num_cells(); ++i) {
        const double half = 0.5 * model.grid().cell_length(i);
        const Matrix H = expm(model.generator.cell(i), half);
        Vector mid = (pi.transpose() * H).transpose();
        mids.push_back(mid.cwiseMax(0.0));
        pi = (mid.transpose() * H).transpose();
    }
    return mids;
}

double weak_only_alpha(const PiecewisePath& a, const PiecewisePath& b,
                       const PiecewisePath& c, double s, double t) {
    // e^{-int_s^t a} int_s^t b_u e^{-int_s^u (b+c)} du with the inner
    // integral accumulated cell by cell in closed form.
    const TimeGrid& grid = a.grid();
    double integral = 0.0;
    double bc_to_left = 0.0;  // int_s^{u_i} (b+c)
    double u = s;
    while (u < t) {
        const std::size_t i = grid.locate(u);
        const double u_next = std::min(t, grid.point(i + 1));
        const double h = u_next - u;
        const double bi = b.cell(i);
        const double ci = c.cell(i);
        const double rate = bi + ci;
        double piece;
        if (rate > 0.0)
            piece = bi / rate * std::exp(-bc_to_left) * (1.0 - std::exp(-rate * h));
        else
            piece = bi * std::exp(-bc_to_left) * h;
        integral += piece;
        bc_to_left += rate * h;
        u = u_next;
    }
    return std::exp(-a.integral(s, t)) * integral;
}

Matrix closed_form_weak_only(const PiecewisePath& a, const PiecewisePath& b,
                             const PiecewisePath& c, double s, double t) {
    if (s > t)
        throw OutOfRange("closed form requires s <= t");
    for (std::size_t i = 0; i < a.num_cells(); ++i)
        if (a.cell(i) < 0.0 || b.cell(i) < 0.0 || c.cell(i) < 0.0)
            throw NegativeRate("rates must be nonnegative");

    const double ea = std::exp(-a.integral(s, t));
    const double eb = std::exp(-b.integral(s, t));
    const double delta = std::exp(-(a.integral(s, t) + b.integral(s, t) + c.integral(s, t)));
    const double alpha = weak_only_alpha(a, b, c, s, t);
    const double beta = weak_only_alpha(b, a, c, s, t);

    Matrix P(4, 4);
    P << delta, alpha, beta, 1.0 - delta - alpha - beta,
        0.0, ea, 0.0, 1.0 - ea,
        0.0, 0.0, eb, 1.0 - eb,
        0.0, 0.0, 0.0, 1.0;
    return P;
}

Matrix marginal_aggregate(const Matrix& P, const ProductStateSpace& space, int k) {
    if (P.rows() != space.dim() || P.cols() != space.dim())
        throw DimensionMismatch("matrix does not match state space");
    const int sk = space.component_size(k);
    Matrix agg = Matrix::Zero(space.dim(), sk);
    for (int x = 0; x < space.dim(); ++x)
        for (int y = 0; y < space.dim(); ++y)
            agg(x, space.coordinate(y, k)) += P(x, y);
    return agg;
}

std::optional<Matrix> collapse_marginal(const Matrix& aggregate,
                                        const ProductStateSpace& space, int k,
                                        double tol) {
    const int sk = space.component_size(k);
    Matrix out(sk, sk);
    for (int xk = 0; xk < sk; ++xk) {
        const std::vector<int> states = space.slice(k, xk);
        out.row(xk) = aggregate.row(states.front());
        for (int x : states)
            if ((aggregate.row(x) - out.row(xk)).cwiseAbs().maxCoeff() > tol)
                return std::nullopt;
    }
    return out;
}

MarginalFieldAggregate marginal_transition_field(const TransitionField& field,
                                                 const ProductStateSpace& space, int k,
                                                 double tol) {
    const std::size_t m = field.grid().size();
    MarginalFieldAggregate out{k, {}, {}};
    std::vector<std::vector<Matrix>> collapsed(m);
    bool product_form = true;
    out.aggregates.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            out.aggregates[i].push_back(marginal_aggregate(field.between(i, j), space, k));
            if (product_form) {
                auto comp = collapse_marginal(out.aggregates[i].back(), space, k, tol);
                if (comp)
                    collapsed[i].push_back(std::move(*comp));
                else
                    product_form = false;
            }
        }
    }
    if (product_form)
        out.component_field = std::move(collapsed);
    return out;
}

}  // namespace cmc
