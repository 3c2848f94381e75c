#include "cmc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cmc/errors.hpp"

namespace cmc {

EmpiricalTransition empirical_transition(const PathBundle& bundle, double s, double t) {
    if (!(s <= t) || t > bundle.horizon())
        throw OutOfRange("empirical transition requires s <= t <= horizon");
    const int d = bundle.dim;
    EmpiricalTransition out;
    out.probs = Matrix::Identity(d, d);
    out.std_error = Matrix::Zero(d, d);
    out.row_counts.assign(d, 0);
    out.visited.assign(d, false);

    Matrix counts = Matrix::Zero(d, d);
    for (std::size_t p = 0; p < bundle.num_paths(); ++p) {
        const int xs = bundle.state_at(p, s);
        const int xt = bundle.state_at(p, t);
        counts(xs, xt) += 1.0;
        ++out.row_counts[xs];
    }
    for (int x = 0; x < d; ++x) {
        const long n = out.row_counts[x];
        if (n == 0)
            continue;  // identity row, flag stays false
        out.visited[x] = true;
        for (int y = 0; y < d; ++y) {
            const double p = counts(x, y) / static_cast<double>(n);
            out.probs(x, y) = p;
            out.std_error(x, y) = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
        }
    }
    return out;
}

CompensatorReport compensator_residual(const PathBundle& bundle, const CmcModel& model,
                                       int x, int y) {
    if (x == y)
        throw OutOfRange("compensator residual needs x != y");
    const TimeGrid& grid = bundle.grid;
    const double T = bundle.horizon();

    double sum = 0.0, sum_sq = 0.0, sum_count = 0.0, sum_comp = 0.0;
    for (std::size_t p = 0; p < bundle.num_paths(); ++p) {
        double count = 0.0;
        double comp = 0.0;
        int state = bundle.initial_states[p];
        double seg_start = 0.0;
        auto add_occupation = [&](double from, double to) {
            if (state != x || from >= to)
                return;
            // integral of lambda^{xy} over the cells intersecting [from, to]
            double u = from;
            while (u < to) {
                const std::size_t cell = grid.locate(u);
                const double u_next = std::min(to, grid.point(cell + 1));
                comp += model.generator.cell(cell)(x, y) * (u_next - u);
                u = u_next;
            }
        };
        for (const JumpEvent& e : bundle.events[p]) {
            add_occupation(seg_start, e.time);
            if (state == x && e.to == y)
                count += 1.0;
            state = e.to;
            seg_start = e.time;
        }
        add_occupation(seg_start, T);
        const double r = count - comp;
        sum += r;
        sum_sq += r * r;
        sum_count += count;
        sum_comp += comp;
    }

    const auto n = static_cast<double>(bundle.num_paths());
    CompensatorReport rep;
    rep.mean = sum / n;
    rep.mean_count = sum_count / n;
    rep.mean_compensator = sum_comp / n;
    const double var = std::max(0.0, sum_sq / n - rep.mean * rep.mean);
    rep.std_error = std::sqrt(var / n);
    rep.z = rep.std_error > 0.0 ? rep.mean / rep.std_error : 0.0;
    return rep;
}

namespace {

// Homogeneity of the target distribution across buckets: pairwise pooled
// two-proportion z plus the chi-square statistic over the contingency table.
StratificationReport homogeneity(const std::map<int, std::vector<long>>& table,
                                 long min_bucket) {
    StratificationReport rep;
    std::vector<std::vector<long>> rows;
    for (const auto& [bucket, counts] : table) {
        const long n = std::accumulate(counts.begin(), counts.end(), 0L);
        if (n < min_bucket) {
            ++rep.buckets_skipped;
            continue;
        }
        rows.push_back(counts);
    }
    rep.buckets_used = static_cast<int>(rows.size());
    if (rows.size() < 2)
        return rep;  // nothing to compare, no effect detectable

    const std::size_t targets = rows.front().size();
    std::vector<long> row_totals(rows.size(), 0);
    std::vector<long> col_totals(targets, 0);
    long grand = 0;
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < targets; ++c) {
            row_totals[r] += rows[r][c];
            col_totals[c] += rows[r][c];
            grand += rows[r][c];
        }

    int used_cols = 0;
    for (std::size_t c = 0; c < targets; ++c) {
        if (col_totals[c] == 0)
            continue;
        ++used_cols;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double expected = static_cast<double>(row_totals[r]) *
                                    static_cast<double>(col_totals[c]) /
                                    static_cast<double>(grand);
            if (expected > 0.0) {
                const double diff = static_cast<double>(rows[r][c]) - expected;
                rep.chi_square += diff * diff / expected;
            }
        }
    }
    rep.dof = (static_cast<int>(rows.size()) - 1) * std::max(0, used_cols - 1);
    rep.p_value = rep.dof > 0 ? chi_square_tail(rep.chi_square, rep.dof) : 1.0;

    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = a + 1; b < rows.size(); ++b)
            for (std::size_t c = 0; c < targets; ++c) {
                const double n1 = static_cast<double>(row_totals[a]);
                const double n2 = static_cast<double>(row_totals[b]);
                const double p1 = rows[a][c] / n1;
                const double p2 = rows[b][c] / n2;
                const double pooled = (rows[a][c] + rows[b][c]) / (n1 + n2);
                const double se =
                    std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
                if (se > 0.0)
                    rep.max_z = std::max(rep.max_z, std::abs(p1 - p2) / se);
            }
    return rep;
}

}  // namespace

WeakMarkovReport empirical_weak_markov_test(const PathBundle& bundle,
                                            const ProductStateSpace& space, int k,
                                            double s, double t, double lag,
                                            long min_bucket) {
    if (!(s < t) || t > bundle.horizon())
        throw OutOfRange("stratification test requires s < t <= horizon");
    if (space.dim() != bundle.dim)
        throw DimensionMismatch("state space does not match the bundle");
    const double s_hist = std::max(0.0, s - lag);
    const int sk = space.component_size(k);

    // bucket key: full time-s state (full_state) or component state at the
    // earlier time (own_history), both stratified within {X^k_s = x^k}
    std::vector<std::map<int, std::vector<long>>> full_tables(sk), hist_tables(sk);

    for (std::size_t p = 0; p < bundle.num_paths(); ++p) {
        const int xs = bundle.state_at(p, s);
        const int xk_s = space.coordinate(xs, k);
        const int xk_t = space.coordinate(bundle.state_at(p, t), k);
        const int xk_hist = space.coordinate(bundle.state_at(p, s_hist), k);

        auto& full_row = full_tables[xk_s][xs];
        if (full_row.empty())
            full_row.assign(sk, 0);
        ++full_row[xk_t];

        auto& hist_row = hist_tables[xk_s][xk_hist];
        if (hist_row.empty())
            hist_row.assign(sk, 0);
        ++hist_row[xk_t];
    }

    WeakMarkovReport report;
    long populated = 0;
    for (int xk = 0; xk < sk; ++xk)
        populated += static_cast<long>(full_tables[xk].size());
    for (int xk = 0; xk < sk; ++xk) {
        const StratificationReport f = homogeneity(full_tables[xk], min_bucket);
        const StratificationReport h = homogeneity(hist_tables[xk], min_bucket);
        auto merge = [](StratificationReport& into, const StratificationReport& from) {
            into.max_z = std::max(into.max_z, from.max_z);
            into.chi_square += from.chi_square;
            into.dof += from.dof;
            into.buckets_used += from.buckets_used;
            into.buckets_skipped += from.buckets_skipped;
        };
        merge(report.full_state, f);
        merge(report.own_history, h);
    }
    report.full_state.p_value = report.full_state.dof > 0
                                    ? chi_square_tail(report.full_state.chi_square,
                                                      report.full_state.dof)
                                    : 1.0;
    report.own_history.p_value = report.own_history.dof > 0
                                     ? chi_square_tail(report.own_history.chi_square,
                                                       report.own_history.dof)
                                     : 1.0;
    if (populated > 0 && report.full_state.buckets_used == 0 &&
        report.own_history.buckets_used == 0)
        throw InsufficientSamples("every stratum fell below " + std::to_string(min_bucket) +
                                  " paths");
    return report;
}

// Regularized incomplete gamma, series for x < a + 1 and Lentz continued
// fraction otherwise.
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw OutOfRange("gamma_q domain");
    if (x == 0.0)
        return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        double ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-16)
                break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - lg);
        return 1.0 - p;
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16)
            break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

double chi_square_tail(double stat, int dof) {
    if (dof <= 0)
        return 1.0;
    return gamma_q(0.5 * dof, 0.5 * stat);
}

}  // namespace cmc
