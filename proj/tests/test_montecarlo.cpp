#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "cmc/copulae.hpp"
#include "cmc/errors.hpp"
#include "cmc/estimators.hpp"
#include "cmc/fixtures.hpp"
#include "cmc/rng.hpp"
#include "cmc/simulate.hpp"

using namespace cmc;

namespace {

CmcModel weak_only(double step = 0.05) {
    const TimeGrid grid = TimeGrid::uniform(1.0, step);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    return build_weak_only(grid, one, one, one).model;
}

bool bundles_identical(const PathBundle& a, const PathBundle& b) {
    if (a.initial_states != b.initial_states || a.num_paths() != b.num_paths())
        return false;
    for (std::size_t p = 0; p < a.num_paths(); ++p) {
        if (a.events[p].size() != b.events[p].size())
            return false;
        for (std::size_t e = 0; e < a.events[p].size(); ++e)
            if (a.events[p][e].time != b.events[p][e].time ||
                a.events[p][e].to != b.events[p][e].to)
                return false;
    }
    return (a.transition_counts - b.transition_counts).cwiseAbs().maxCoeff() == 0.0 &&
           (a.occupation - b.occupation).cwiseAbs().maxCoeff() == 0.0;
}

}  // namespace

TEST_CASE("counter generator reproduces the published reference block") {
    // philox4x32-10 of counter {0,0,0,0} under key {0,0}
    CounterRng rng(0, 0);
    CHECK(rng.next_u32() == 0x6627e8d5u);
    CHECK(rng.next_u32() == 0xe169c58du);
    CHECK(rng.next_u32() == 0xbc57ac4cu);
    CHECK(rng.next_u32() == 0x9b00dbd8u);
}

TEST_CASE("counter streams are reproducible and distinct") {
    CounterRng a(42, 7), b(42, 7), c(42, 8);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());
    bool differs = false;
    CounterRng a2(42, 7);
    for (int i = 0; i < 100; ++i)
        differs = differs || (a2.next_u64() != c.next_u64());
    CHECK(differs);

    CounterRng u(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        const double y = u.uniform_positive();
        CHECK(y > 0.0);
        CHECK(y <= 1.0);
    }
}

TEST_CASE("parallel kernel reproduces the serial reference bit for bit") {
    const CmcModel model = weak_only(0.25);
    const PathBundle par = simulate(model, 5000, 123);
    const PathBundle ser = simulate_reference(model, 5000, 123);
    CHECK(bundles_identical(par, ser));

    // re-running with the same seed is idempotent
    CHECK(bundles_identical(par, simulate(model, 5000, 123)));

    // and a thread cap does not change the result
    setenv("CMC_THREADS", "1", 1);
    const PathBundle capped = simulate(model, 5000, 123);
    unsetenv("CMC_THREADS");
    CHECK(bundles_identical(par, capped));
}

TEST_CASE("zero intensity never jumps") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    Vector half(4);
    half << 0.5, 0.0, 0.0, 0.5;
    const CmcModel model = fixtures::make_model(grid, Matrix::Zero(4, 4), {2, 2}, half);
    const PathBundle bundle = simulate(model, 2000, 9);
    bundle.validate();
    CHECK(bundle.transition_counts.sum() == 0.0);
    for (std::size_t p = 0; p < bundle.num_paths(); ++p)
        CHECK(bundle.events[p].empty());
    // initial sampling matches the law within a loose band
    const double frac0 =
        bundle.occupation[0] / static_cast<double>(bundle.num_paths());
    CHECK(frac0 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("absorption frequency of the two-state chain matches the closed form") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const CmcModel model = fixtures::make_model(grid, fixtures::absorbing_two_state(1.0), {2},
                                                InitialLaw::point_mass(2, 0).probs);
    const std::size_t n = 100000;
    const PathBundle bundle = simulate(model, n, 42);
    long absorbed = 0;
    for (std::size_t p = 0; p < n; ++p)
        absorbed += bundle.state_at(p, 1.0) == 1;
    const double expected = 1.0 - std::exp(-1.0);
    const double freq = static_cast<double>(absorbed) / static_cast<double>(n);
    const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
    CHECK(std::abs(freq - expected) <= 3.0 * se);
}

TEST_CASE("perfect dependence keeps components pathwise equal") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    MarginalSpec spec{grid, {ComponentTarget{}, ComponentTarget{}}};
    for (auto& comp : spec.components) {
        comp.cells.assign(grid.num_cells(), fixtures::absorbing_two_state(1.0));
        comp.initial = Vector::Zero(2);
        comp.initial[0] = 1.0;
    }
    const CopulaCandidate cand = build_perfect_dependence(spec);
    const PathBundle bundle = simulate(cand.model, 5000, 11);
    const ProductStateSpace& space = cand.model.space;
    for (std::size_t p = 0; p < bundle.num_paths(); ++p) {
        int state = bundle.initial_states[p];
        CHECK(space.coordinate(state, 0) == space.coordinate(state, 1));
        for (const JumpEvent& e : bundle.events[p])
            CHECK(space.coordinate(e.to, 0) == space.coordinate(e.to, 1));
    }
}

TEST_CASE("empirical transition at s = t is the identity on visited rows") {
    const CmcModel model = weak_only(0.25);
    const PathBundle bundle = simulate(model, 2000, 5);
    const EmpiricalTransition emp = empirical_transition(bundle, 0.5, 0.5);
    for (int x = 0; x < 4; ++x)
        if (emp.visited[x])
            CHECK((emp.probs.row(x) - Matrix::Identity(4, 4).row(x)).cwiseAbs().maxCoeff() ==
                  0.0);
}

TEST_CASE("empirical transition rows are frequencies that sum to one") {
    const CmcModel model = weak_only(0.25);
    const PathBundle bundle = simulate(model, 20000, 5);
    const EmpiricalTransition emp = empirical_transition(bundle, 0.0, 1.0);
    for (int x = 0; x < 4; ++x)
        CHECK(std::abs(emp.probs.row(x).sum() - 1.0) <= 1e-12);
    // only the initial state is populated at s = 0
    CHECK(emp.row_counts[0] == 20000);
    CHECK(!emp.visited[1]);
}

TEST_CASE("empirical transition matches the closed form within four standard errors") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    const CmcModel model = build_weak_only(grid, one, one, one).model;
    const std::size_t n = 100000;
    const PathBundle bundle = simulate(model, n, 42);
    const EmpiricalTransition emp = empirical_transition(bundle, 0.0, 1.0);
    const Matrix closed = closed_form_weak_only(one, one, one, 0.0, 1.0);
    for (int y = 0; y < 4; ++y) {
        const double se = std::max(emp.std_error(0, y), 1e-12);
        CHECK(std::abs(emp.probs(0, y) - closed(0, y)) <= 4.0 * se);
    }
}

TEST_CASE("joint empirical rows of product models factorize within sampling error") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const CopulaCandidate cand =
        build_conditional_independence(fixtures::absorbing_pair_spec(grid, 1.0, 2.0));
    const std::size_t n = 100000;
    const PathBundle bundle = simulate(cand.model, n, 314);
    const EmpiricalTransition emp = empirical_transition(bundle, 0.0, 1.0);
    const ProductStateSpace& space = cand.model.space;
    // marginal frequencies from the same sample
    Vector m1 = Vector::Zero(2), m2 = Vector::Zero(2);
    for (int y = 0; y < 4; ++y) {
        m1[space.coordinate(y, 0)] += emp.probs(0, y);
        m2[space.coordinate(y, 1)] += emp.probs(0, y);
    }
    for (int y = 0; y < 4; ++y) {
        const double product = m1[space.coordinate(y, 0)] * m2[space.coordinate(y, 1)];
        CHECK(std::abs(emp.probs(0, y) - product) <= 0.01);
    }
}

TEST_CASE("compensator residual vanishes identically for a frozen chain") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const CmcModel model = fixtures::make_model(grid, Matrix::Zero(3, 3), {3},
                                                InitialLaw::point_mass(3, 0).probs);
    const PathBundle bundle = simulate(model, 1000, 3);
    const CompensatorReport rep = compensator_residual(bundle, model, 0, 1);
    CHECK(rep.mean == 0.0);
    CHECK(rep.std_error == 0.0);
    CHECK(rep.z == 0.0);
}

TEST_CASE("common-jump compensator matches the closed-form occupation") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const CopulaCandidate cand = build_common_jump(
        grid, PiecewisePath::constant(grid, 1.0), PiecewisePath::constant(grid, 1.0),
        PiecewisePath::constant(grid, 0.5));
    const std::size_t n = 100000;
    const PathBundle bundle = simulate(cand.model, n, 77);

    const CompensatorReport rep = compensator_residual(bundle, cand.model, 0, 3);
    CHECK(std::abs(rep.z) <= 4.0);

    // E[occupation of (0,0)] = (1 - e^{-1.5}) / 1.5 and E[counts] = c * that
    const double occ = (1.0 - std::exp(-1.5)) / 1.5;
    CHECK(rep.mean_compensator == doctest::Approx(0.5 * occ).epsilon(0.02));
    CHECK(rep.mean_count == doctest::Approx(0.5 * occ).epsilon(0.05));
}

TEST_CASE("per-target residuals add up to the exit residual") {
    const CmcModel model = weak_only(0.1);
    const PathBundle bundle = simulate(model, 20000, 8);
    double total_mean = 0.0;
    for (int y = 1; y < 4; ++y)
        total_mean += compensator_residual(bundle, model, 0, y).mean;

    // independent route from the aggregates: counts out of (0,0) minus
    // exit rate times total occupation of (0,0)
    const double n = static_cast<double>(bundle.num_paths());
    const double counts = bundle.transition_counts.row(0).sum();
    const double exit_rate = -model.generator.cell(0)(0, 0);
    const double expected = (counts - exit_rate * bundle.occupation[0]) / n;
    CHECK(total_mean == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("compensator z-scores stay bounded across fixtures and pairs") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.1);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    const std::vector<CmcModel> models = {
        build_weak_only(grid, one, one, one).model,
        build_common_jump(grid, one, PiecewisePath::constant(grid, 2.0),
                          PiecewisePath::constant(grid, 0.5))
            .model,
        build_conditional_independence(fixtures::absorbing_pair_spec(grid, 1.0, 2.0)).model,
    };
    for (const CmcModel& model : models) {
        const PathBundle bundle = simulate(model, 50000, 1234);
        for (int x = 0; x < model.dim(); ++x)
            for (int y = 0; y < model.dim(); ++y) {
                if (x == y)
                    continue;
                CHECK(std::abs(compensator_residual(bundle, model, x, y).z) <= 4.0);
            }
    }
}

TEST_CASE("stratification test separates the two filtrations on the common-shock model") {
    const CmcModel model = weak_only();
    const std::size_t n = 100000;
    const PathBundle bundle = simulate(model, n, 42);
    const ProductStateSpace& space = model.space;

    const WeakMarkovReport rep =
        empirical_weak_markov_test(bundle, space, 0, 0.5, 1.0, 0.25);
    CHECK(rep.full_state.max_z > 4.0);      // pool state carries information
    CHECK(rep.own_history.max_z <= 4.0);    // own past does not
    CHECK(rep.full_state.p_value < 1e-4);
}

TEST_CASE("no stratification effect for the Kronecker-sum model") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const CopulaCandidate cand =
        build_conditional_independence(fixtures::absorbing_pair_spec(grid, 1.0, 2.0));
    const PathBundle bundle = simulate(cand.model, 100000, 271);
    const WeakMarkovReport rep =
        empirical_weak_markov_test(bundle, cand.model.space, 0, 0.5, 1.0, 0.25);
    CHECK(rep.full_state.max_z <= 4.0);
    CHECK(rep.own_history.max_z <= 4.0);
    CHECK(rep.full_state.p_value > 1e-4);
}

TEST_CASE("stratification test raises when every bucket is too small") {
    const CmcModel model = weak_only(0.25);
    const PathBundle tiny = simulate(model, 10, 1);
    CHECK_THROWS_AS(
        empirical_weak_markov_test(tiny, model.space, 0, 0.5, 1.0, 0.25, 1000),
        InsufficientSamples);
}

TEST_CASE("simulation rejects an empty path request") {
    CHECK_THROWS_AS(simulate(weak_only(0.25), 0, 1), InvalidSeedStream);
}

TEST_CASE("chi-square tail probabilities agree with reference values") {
    // reference values from the usual tables
    CHECK(chi_square_tail(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_tail(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi_square_tail(0.0, 5) == 1.0);
    CHECK(gamma_q(0.5, 50.0) < 1e-20);
}

TEST_CASE("path bundle aggregates respect the occupancy identity") {
    const CmcModel model = weak_only(0.25);
    const PathBundle bundle = simulate(model, 3000, 2);
    bundle.validate();
    CHECK(bundle.occupation.sum() ==
          doctest::Approx(3000.0 * bundle.horizon()).epsilon(1e-12));
}
