#include "cmc/premium.hpp"

#include <array>
#include <cmath>

#include "cmc/errors.hpp"
#include "cmc/kolmogorov.hpp"
#include "cmc/simulate.hpp"

namespace cmc {

void PoolModel::validate() const {
    const ProductStateSpace& space = candidate.model.space;
    for (int k = 0; k < space.num_components(); ++k)
        if (space.component_size(k) != 2)
            throw DimensionMismatch("pool components must be two-state");
    if (discount_rate < 0.0)
        throw Error("discount rate must be nonnegative");
    if (!candidate.model.grid().on_grid(eval_time))
        throw Error("evaluation time must lie on the grid");
}

namespace {

// int_{u1}^{u2} e^{-r (u - t)} du
double discount_integral(double t, double u1, double u2, double r) {
    if (u2 <= u1)
        return 0.0;
    if (r == 0.0)
        return u2 - u1;
    return (std::exp(-r * (u1 - t)) - std::exp(-r * (u2 - t))) / r;
}

struct Accumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    long n = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    PremiumEstimate estimate() const {
        PremiumEstimate e;
        if (n == 0)
            return e;
        e.defined = true;
        e.samples = n;
        e.value = sum / n;
        const double var = std::max(0.0, sum_sq / n - e.value * e.value);
        e.std_error = std::sqrt(var / n);
        return e;
    }
};

}  // namespace

PremiumQuote price(const PoolModel& pool, std::size_t n_paths, std::uint64_t seed) {
    pool.validate();
    const CmcModel& model = pool.candidate.model;
    const ProductStateSpace& space = model.space;
    const int n_comp = space.num_components();
    const double t0 = pool.eval_time;
    const double T = model.grid().horizon();

    const PathBundle bundle = simulate(model, n_paths, seed);

    std::vector<std::array<Accumulator, 2>> own(n_comp);
    std::vector<std::vector<Accumulator>> by_pool(n_comp,
                                                  std::vector<Accumulator>(space.dim()));

    std::vector<double> payoff(n_comp);
    for (std::size_t p = 0; p < bundle.num_paths(); ++p) {
        std::fill(payoff.begin(), payoff.end(), 0.0);
        // walk the path segments overlapping [t0, T]
        int state = bundle.initial_states[p];
        double seg_start = 0.0;
        auto add_segment = [&](double from, double to, int seg_state) {
            const double lo = std::max(from, t0);
            if (lo >= to)
                return;
            const double w =
                pool.benefit_rate * discount_integral(t0, lo, to, pool.discount_rate);
            for (int k = 0; k < n_comp; ++k)
                if (space.coordinate(seg_state, k) == 1)
                    payoff[k] += w;
        };
        for (const JumpEvent& e : bundle.events[p]) {
            add_segment(seg_start, e.time, state);
            seg_start = e.time;
            state = e.to;
        }
        add_segment(seg_start, T, state);

        const int pool_state = bundle.state_at(p, t0);
        for (int k = 0; k < n_comp; ++k) {
            own[k][space.coordinate(pool_state, k)].add(payoff[k]);
            by_pool[k][pool_state].add(payoff[k]);
        }
    }

    PremiumQuote quote;
    quote.n_paths = n_paths;
    quote.seed = seed;
    quote.individual.resize(n_comp);
    quote.pool.resize(n_comp);
    for (int k = 0; k < n_comp; ++k) {
        quote.individual[k] = {own[k][0].estimate(), own[k][1].estimate()};
        quote.pool[k].reserve(space.dim());
        for (int x = 0; x < space.dim(); ++x)
            quote.pool[k].push_back(by_pool[k][x].estimate());
    }
    return quote;
}

PremiumQuote price_closed_form(const PoolModel& pool) {
    pool.validate();
    switch (pool.candidate.kind) {
        case CopulaKind::CommonJump:
        case CopulaKind::WeakOnly:
        case CopulaKind::ConditionalIndependence:
            break;
        default:
            throw UnsupportedKind("no quadrature route for kind " +
                                  to_string(pool.candidate.kind));
    }

    const CmcModel& model = pool.candidate.model;
    const ProductStateSpace& space = model.space;
    const int n_comp = space.num_components();
    const double t0 = pool.eval_time;
    const TimeGrid& grid = model.grid();
    const TransitionField field = solve_forward(model);

    // 16-point Gauss-Legendre nodes on [0,1]; the integrand is smooth inside
    // each cell so per-cell quadrature converges to machine precision.
    static const std::array<double, 16> kNodes = {
        0.005299532504175031, 0.0277124884633837,   0.06718439880608412,
        0.12229779582249845,  0.19106187779867811,  0.27099161117138637,
        0.35919822461037054,  0.4524937450811813,   0.5475062549188188,
        0.6408017753896295,   0.7290083888286137,   0.8089381222013219,
        0.8777022041775016,   0.9328156011939159,   0.9722875115366163,
        0.994700467495825};
    static const std::array<double, 16> kWeights = {
        0.013576229705877047, 0.03112676196932395, 0.04757925584124639,
        0.06231448562776694,  0.07479799440828837, 0.08457825969750127,
        0.09130170752246179,  0.0947253052275343,  0.0947253052275343,
        0.09130170752246179,  0.08457825969750127, 0.07479799440828837,
        0.06231448562776694,  0.04757925584124639, 0.03112676196932395,
        0.013576229705877047};

    // premium conditional on pool state x at t0, per component
    Matrix pool_premium = Matrix::Zero(space.dim(), n_comp);
    const std::size_t first_cell = grid.locate(t0);
    Matrix P_to_cell = Matrix::Identity(space.dim(), space.dim());  // P(t0, cell start)
    for (std::size_t cell = first_cell; cell < grid.num_cells(); ++cell) {
        const double a = std::max(t0, grid.point(cell));
        const double b = grid.point(cell + 1);
        if (a >= b)
            continue;
        for (int q = 0; q < 16; ++q) {
            const double u = a + (b - a) * kNodes[q];
            const double w = (b - a) * kWeights[q] *
                             std::exp(-pool.discount_rate * (u - t0)) * pool.benefit_rate;
            const Matrix P = P_to_cell * field.at(a, u);
            for (int x = 0; x < space.dim(); ++x)
                for (int y = 0; y < space.dim(); ++y) {
                    if (P(x, y) == 0.0)
                        continue;
                    for (int k = 0; k < n_comp; ++k)
                        if (space.coordinate(y, k) == 1)
                            pool_premium(x, k) += w * P(x, y);
                }
        }
        P_to_cell = P_to_cell * field.at(a, b);
    }

    const Vector pi = state_distribution_at(model, t0);

    PremiumQuote quote;
    quote.individual.resize(n_comp);
    quote.pool.resize(n_comp);
    for (int k = 0; k < n_comp; ++k) {
        quote.pool[k].resize(space.dim());
        for (int x = 0; x < space.dim(); ++x) {
            PremiumEstimate& e = quote.pool[k][x];
            if (pi[x] > kSupportEps) {
                e.defined = true;
                e.value = pool_premium(x, k);
            }
        }
        quote.individual[k].resize(2);
        for (int own_state = 0; own_state < 2; ++own_state) {
            double mass = 0.0, acc = 0.0;
            for (int x : space.slice(k, own_state)) {
                mass += pi[x];
                acc += pi[x] * pool_premium(x, k);
            }
            PremiumEstimate& e = quote.individual[k][own_state];
            if (mass > kSupportEps) {
                e.defined = true;
                e.value = acc / mass;
            }
        }
    }
    return quote;
}

}  // namespace cmc
