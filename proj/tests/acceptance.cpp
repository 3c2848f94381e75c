// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cmc/consistency.hpp"
#include "cmc/copulae.hpp"
#include "cmc/estimators.hpp"
#include "cmc/fixtures.hpp"
#include "cmc/kolmogorov.hpp"
#include "cmc/premium.hpp"
#include "cmc/simulate.hpp"
#include "test_util.hpp"

using namespace cmc;

namespace {

struct Criterion {
    std::string name;
    bool pass = true;
    std::string detail = {};

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kPaths = 100000;

CopulaCandidate weak_only_unit(double step = 0.05) {
    const TimeGrid grid = TimeGrid::uniform(1.0, step);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    return build_weak_only(grid, one, one, one);
}

// ------------------------------------------------------------------
Criterion criterion_1_forward_oracle() {
    Criterion c{"1 forward solve matches the closed-form field"};
    const auto start = std::chrono::steady_clock::now();

    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    const CmcModel model = weak_only_unit().model;
    const TransitionField field = solve_forward(model);

    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i; j < grid.size(); ++j)
            err = std::max(err, (field.between(i, j) -
                                 closed_form_weak_only(one, one, one, grid.point(i),
                                                       grid.point(j)))
                                    .cwiseAbs()
                                    .maxCoeff());
    c.require(err <= 1e-8, "entrywise error " + std::to_string(err));

    const StateDistributionPath pi = state_distribution(model);
    const double delta_1 = std::exp(-3.0);
    const double alpha_01 = std::exp(-1.0) * (1.0 - std::exp(-2.0)) / 2.0;
    c.require(std::abs(pi.values.back()[0] - delta_1) <= 1e-8, "delta spot value");
    c.require(std::abs(pi.values.back()[1] - alpha_01) <= 1e-8, "alpha spot value");

    const double elapsed = seconds_since(start);
    c.require(elapsed < 1.0, "runtime " + std::to_string(elapsed) + " s");
    char buf[96];
    std::snprintf(buf, sizeof(buf), " (max err %.2e, %.3f s)", err, elapsed);
    c.detail += buf;
    return c;
}

// ------------------------------------------------------------------
Criterion criterion_2_kronecker_product() {
    Criterion c{"2 product models factorize into component solutions"};
    test_util::Lcg rng(2024);
    double worst = 0.0;
    for (const auto& sizes :
         {std::vector<int>{2, 2}, std::vector<int>{2, 2, 2}, std::vector<int>{2, 2, 3}}) {
        const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
        std::vector<TransitionField> comp_fields;
        std::vector<std::vector<Matrix>> comp_cells(sizes.size());
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            for (std::size_t i = 0; i < grid.num_cells(); ++i)
                comp_cells[k].push_back(test_util::random_generator(rng, sizes[k]));
            comp_fields.push_back(solve_forward(
                CmcModel(ProductStateSpace({sizes[k]}),
                         GeneratorPath(FactorScenario(grid), comp_cells[k]),
                         InitialLaw::point_mass(sizes[k], 0))));
        }
        std::vector<Matrix> cells;
        for (std::size_t i = 0; i < grid.num_cells(); ++i) {
            std::vector<Matrix> per;
            for (std::size_t k = 0; k < sizes.size(); ++k)
                per.push_back(comp_cells[k][i]);
            cells.push_back(kron_sum(per));
        }
        ProductStateSpace space(sizes);
        const TransitionField field = solve_forward(
            CmcModel(space, GeneratorPath(FactorScenario(grid), cells),
                     InitialLaw::point_mass(space.dim(), 0)));
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (std::size_t j = i; j < grid.size(); ++j) {
                Matrix expected = comp_fields[0].between(i, j);
                for (std::size_t k = 1; k < sizes.size(); ++k)
                    expected = kron(expected, comp_fields[k].between(i, j));
                worst = std::max(worst,
                                 (field.between(i, j) - expected).cwiseAbs().maxCoeff());
            }
    }
    c.require(worst <= 1e-8, "worst gap " + std::to_string(worst));
    char buf[48];
    std::snprintf(buf, sizeof(buf), " (worst gap %.2e)", worst);
    c.detail += buf;
    return c;
}

// ------------------------------------------------------------------
Criterion criterion_3_consistency_fixtures() {
    Criterion c{"3 strong-consistency verdicts on the flip-chain versions"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const double a = 1.0, b = 0.5;
    Vector mixed = Vector::Zero(4);
    mixed[0] = 0.7;
    mixed[3] = 0.3;

    const CmcModel sparse =
        fixtures::make_model(grid, fixtures::sync_flip_sparse(a, b), {2, 2}, mixed);
    const ConsistencyReport asm_sparse = check_asm(sparse, 0);
    c.require(asm_sparse.algebraic_strong == Verdict::Fail, "sparse version must fail");
    bool witness = false;
    for (const Witness& w : asm_sparse.witnesses)
        witness = witness || (std::abs(std::max(w.lhs, w.rhs) - a) < 1e-15 &&
                              std::min(w.lhs, w.rhs) == 0.0);
    c.require(witness, "witness a vs 0 missing");

    const CmcModel filled =
        fixtures::make_model(grid, fixtures::sync_flip_filled(a, b), {2, 2}, mixed);
    for (int k = 0; k < 2; ++k) {
        const ConsistencyReport rep = check_asm(filled, k);
        c.require(rep.algebraic_strong == Verdict::Pass, "filled version must pass");
        if (rep.marginal)
            c.require(std::abs(rep.marginal->cells[0](0, 1) - a) < 1e-15 &&
                          std::abs(rep.marginal->cells[0](1, 0) - b) < 1e-15,
                      "extracted marginal rates");
    }

    c.require(check_sm(sparse, 0).strong == Verdict::Pass &&
                  check_sm(sparse, 1).strong == Verdict::Pass,
              "support-restricted pass under diagonal law");
    const CmcModel off = fixtures::make_model(grid, fixtures::sync_flip_sparse(a, b), {2, 2},
                                              InitialLaw::point_mass(4, 1).probs);
    c.require(check_sm(off, 0).strong == Verdict::Fail,
              "support-restricted fail under off-diagonal law");
    return c;
}

// ------------------------------------------------------------------
Criterion criterion_4_strong_copula_roundtrip() {
    Criterion c{"4 strong copulae validate and return their targets exactly"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const MarginalSpec spec = fixtures::absorbing_pair_spec(grid, 1.0, 2.0);

    std::vector<CopulaCandidate> candidates;
    candidates.push_back(build_conditional_independence(spec));
    for (double cj : {0.0, 0.25, 0.5})
        candidates.push_back(build_common_jump(grid, PiecewisePath::constant(grid, 1.0),
                                               PiecewisePath::constant(grid, 2.0),
                                               PiecewisePath::constant(grid, cj)));

    for (const CopulaCandidate& cand : candidates) {
        const PrecopulaReport rep = validate_precopula(cand, cand.targets, 1e-12);
        c.require(rep.strong_pass(), to_string(cand.kind) + " strong conditions");
        for (int k = 0; k < 2; ++k) {
            const MarginalIntensityPath m = extract_strong_marginal(cand.model, k);
            for (std::size_t i = 0; i < m.cells.size(); ++i)
                c.require((m.cells[i] - cand.targets.components[k].cells[i])
                                  .cwiseAbs()
                                  .maxCoeff() <= 1e-12,
                          "marginal round-trip");
        }
    }
    return c;
}

// ------------------------------------------------------------------
Criterion criterion_5_weak_only_certification() {
    Criterion c{"5 weak-only construction certifies and decomposes"};
    const CopulaCandidate cand = weak_only_unit();
    const TimeGrid& grid = cand.model.grid();

    double gap = 0.0;
    for (int k = 0; k < 2; ++k) {
        const MarginalIntensityPath weak = weak_marginal_intensity(cand.model, k);
        for (std::size_t i = 0; i < weak.cells.size(); ++i)
            gap = std::max(gap, (weak.cells[i] - cand.targets.components[k].cells[i])
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    c.require(gap <= 1e-7, "marginal formulas gap " + std::to_string(gap));

    const auto idx = all_grid_indices(grid);
    c.require(certify_weak_only(cand.model, 0, idx, idx).certified, "certified for c=1");
    const CopulaCandidate indep =
        build_common_jump(grid, PiecewisePath::constant(grid, 1.0),
                          PiecewisePath::constant(grid, 1.0),
                          PiecewisePath::constant(grid, 0.0));
    c.require(!certify_weak_only(indep.model, 0, idx, idx).certified,
              "not certified for c=0");

    const WeakOnlyDecomposition dec = decompose_weak_only(cand);
    double rec = 0.0;
    for (std::size_t i = 0; i < grid.num_cells(); ++i)
        rec = std::max(rec, (dec.kron_sum_part[i] + dec.joint_shock[i] -
                             dec.adjust_first[i] - dec.adjust_second[i] -
                             cand.model.generator.cell(i))
                                .cwiseAbs()
                                .maxCoeff());
    c.require(rec <= 1e-10, "decomposition residual " + std::to_string(rec));
    return c;
}

// ------------------------------------------------------------------
std::string run_monte_carlo_block(Criterion& c) {
    std::ostringstream report;
    report.precision(17);

    // (a) absorption frequency of the two-state chain
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const CmcModel two_state = fixtures::make_model(
        grid, fixtures::absorbing_two_state(1.0), {2}, InitialLaw::point_mass(2, 0).probs);
    const PathBundle tb = simulate(two_state, kPaths, kSeed);
    long absorbed = 0;
    for (std::size_t p = 0; p < tb.num_paths(); ++p)
        absorbed += tb.state_at(p, 1.0) == 1;
    const double target = 1.0 - std::exp(-1.0);
    const double freq = static_cast<double>(absorbed) / static_cast<double>(kPaths);
    const double se_a =
        std::sqrt(target * (1.0 - target) / static_cast<double>(kPaths));
    c.require(std::abs(freq - target) <= 4.0 * se_a, "absorption frequency");
    report << "absorption " << freq << "\n";

    // (b) empirical transition row of the weak-only model
    const CopulaCandidate cand = weak_only_unit();
    const PiecewisePath one = PiecewisePath::constant(cand.model.grid(), 1.0);
    const PathBundle wb = simulate(cand.model, kPaths, kSeed);
    const EmpiricalTransition emp = empirical_transition(wb, 0.0, 1.0);
    const Matrix closed = closed_form_weak_only(one, one, one, 0.0, 1.0);
    for (int y = 0; y < 4; ++y) {
        const double se = std::max(emp.std_error(0, y), 1e-12);
        c.require(std::abs(emp.probs(0, y) - closed(0, y)) <= 4.0 * se,
                  "empirical row entry " + std::to_string(y));
        report << "row00 " << y << " " << emp.probs(0, y) << "\n";
    }

    // (c) compensator residuals on every pair of every fixture
    const std::vector<CmcModel> fixtures_list = {
        two_state, cand.model,
        build_common_jump(grid, one, one, PiecewisePath::constant(grid, 0.5)).model,
        build_conditional_independence(fixtures::absorbing_pair_spec(grid, 1.0, 2.0)).model};
    for (std::size_t f = 0; f < fixtures_list.size(); ++f) {
        const CmcModel& model = fixtures_list[f];
        const PathBundle bundle = f == 0 ? tb : (f == 1 ? wb : simulate(model, kPaths, kSeed));
        for (int x = 0; x < model.dim(); ++x)
            for (int y = 0; y < model.dim(); ++y) {
                if (x == y)
                    continue;
                const CompensatorReport rep = compensator_residual(bundle, model, x, y);
                c.require(std::abs(rep.z) <= 4.0,
                          "compensator z fixture " + std::to_string(f) + " pair " +
                              std::to_string(x) + "->" + std::to_string(y));
                report << "z " << f << " " << x << " " << y << " " << rep.z << "\n";
            }
    }

    // (d) stratification effects on the weak-only model
    const WeakMarkovReport wm =
        empirical_weak_markov_test(wb, cand.model.space, 0, 0.5, 1.0, 0.05);
    c.require(wm.full_state.max_z > 4.0, "full-state stratification effect");
    c.require(wm.own_history.max_z <= 4.0, "own-history stratification effect");
    report << "strat " << wm.full_state.max_z << " " << wm.own_history.max_z << "\n";
    return report.str();
}

Criterion criterion_6_monte_carlo(std::string& serialized) {
    Criterion c{"6 seed-fixed Monte Carlo block"};
    const auto start = std::chrono::steady_clock::now();
    serialized = run_monte_carlo_block(c);
    const double elapsed = seconds_since(start);
    c.require(elapsed < 60.0, "runtime " + std::to_string(elapsed) + " s");
    char buf[48];
    std::snprintf(buf, sizeof(buf), " (%.1f s)", elapsed);
    c.detail += buf;
    return c;
}

// ------------------------------------------------------------------
std::string run_premium_block(Criterion& c) {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    const PoolModel pool{build_weak_only(grid, one, one, one), 0.0, 1.0, 0.5};
    const PremiumQuote mc = price(pool, kPaths, kSeed);
    const PremiumQuote cf = price_closed_form(pool);

    const PremiumEstimate& p00 = mc.pool[0][0];
    const PremiumEstimate& p01 = mc.pool[0][1];
    const PremiumEstimate& ind = mc.individual[0][0];

    auto below = [](const PremiumEstimate& x, const PremiumEstimate& y) {
        // strictly smaller with non-overlapping 4-SE intervals
        return x.value + 4.0 * x.std_error < y.value - 4.0 * y.std_error;
    };
    c.require(below(p00, ind) && below(ind, p01),
              "stated ordering pool(0,0) < individual < pool(0,1); measured " +
                  std::to_string(p00.value) + " / " + std::to_string(ind.value) + " / " +
                  std::to_string(p01.value));

    auto close = [](const PremiumEstimate& sampled, const PremiumEstimate& exact) {
        return std::abs(sampled.value - exact.value) <=
               std::max(4.0 * sampled.std_error, 1e-9);
    };
    bool agree = true;
    for (int k = 0; k < 2; ++k) {
        for (int s = 0; s < 2; ++s)
            if (mc.individual[k][s].defined)
                agree = agree && close(mc.individual[k][s], cf.individual[k][s]);
        for (std::size_t x = 0; x < mc.pool[k].size(); ++x)
            if (mc.pool[k][x].defined && cf.pool[k][x].defined)
                agree = agree && close(mc.pool[k][x], cf.pool[k][x]);
    }
    c.require(agree, "agreement with the quadrature route");

    // c = 0: pool information must be worthless
    const PoolModel indep{
        build_conditional_independence(fixtures::absorbing_pair_spec(grid, 1.0, 1.0)), 0.0,
        1.0, 0.5};
    const PremiumQuote mc0 = price(indep, kPaths, kSeed);
    for (int other : {0, 1}) {
        const PremiumEstimate& by_pool = mc0.pool[0][other];
        const PremiumEstimate& own = mc0.individual[0][0];
        const double se = std::sqrt(by_pool.std_error * by_pool.std_error +
                                    own.std_error * own.std_error);
        c.require(std::abs(by_pool.value - own.value) <= 4.0 * se,
                  "independent pool premium gap");
    }

    std::ostringstream report;
    report.precision(17);
    report << "p00 " << p00.value << " " << p00.std_error << "\n";
    report << "ind " << ind.value << " " << ind.std_error << "\n";
    report << "p01 " << p01.value << " " << p01.std_error << "\n";
    report << "indep gap " << mc0.pool[0][0].value - mc0.individual[0][0].value << "\n";
    return report.str();
}

Criterion criterion_7_premium(std::string& serialized) {
    Criterion c{"7 pool-aware premium ordering and oracle agreement"};
    serialized = run_premium_block(c);
    return c;
}

// ------------------------------------------------------------------
Criterion criterion_8_determinism(const std::string& mc_report,
                                  const std::string& premium_report) {
    Criterion c{"8 reruns with the same seed are byte-identical"};
    Criterion scratch{"scratch"};
    const std::string mc_again = run_monte_carlo_block(scratch);
    const std::string premium_again = run_premium_block(scratch);
    c.require(mc_again == mc_report, "Monte Carlo report differs across reruns");
    c.require(premium_again == premium_report, "premium report differs across reruns");
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion> results;
    results.push_back(criterion_1_forward_oracle());
    results.push_back(criterion_2_kronecker_product());
    results.push_back(criterion_3_consistency_fixtures());
    results.push_back(criterion_4_strong_copula_roundtrip());
    results.push_back(criterion_5_weak_only_certification());
    std::string mc_report, premium_report;
    results.push_back(criterion_6_monte_carlo(mc_report));
    results.push_back(criterion_7_premium(premium_report));
    results.push_back(criterion_8_determinism(mc_report, premium_report));

    int failures = 0;
    for (const Criterion& c : results) {
        std::printf("%s criterion %s%s%s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.empty() ? "" : " -- ", c.detail.c_str());
        failures += c.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(results.size()) - failures,
                results.size());
    return failures == 0 ? 0 : 1;
}
