#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cmc/errors.hpp"
#include "cmc/fixtures.hpp"
#include "cmc/premium.hpp"

using namespace cmc;

namespace {

PoolModel weak_only_pool(double c, double r = 0.0, double t = 0.5) {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    return PoolModel{build_weak_only(grid, one, one, PiecewisePath::constant(grid, c)), r,
                     1.0, t};
}

PoolModel independence_pool(double t = 0.5) {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    return PoolModel{
        build_conditional_independence(fixtures::absorbing_pair_spec(grid, 1.0, 1.0)), 0.0,
        1.0, t};
}

}  // namespace

TEST_CASE("quadrature route reproduces the hand-integrated conditional premia") {
    // occupation integrals of the closed-form field, t = 0.5, r = 0:
    //   given (0,0):  1/2 - (1 - e^{-1/2})/2 - (1 - e^{-3/2})/6
    //   given (0,1):  1/2 - (1 - e^{-1/2})
    //   own state 0:  mixture with weights delta/(delta+alpha), alpha/(delta+alpha)
    const PremiumQuote quote = price_closed_form(weak_only_pool(1.0));
    const double given_00 = 0.5 - (1.0 - std::exp(-0.5)) / 2.0 - (1.0 - std::exp(-1.5)) / 6.0;
    const double given_01 = 0.5 - (1.0 - std::exp(-0.5));
    const double delta = std::exp(-1.5);
    const double alpha = std::exp(-0.5) * (1.0 - std::exp(-1.0)) / 2.0;
    const double own0 = (delta * given_00 + alpha * given_01) / (delta + alpha);

    CHECK(quote.pool[0][0].value == doctest::Approx(given_00).epsilon(1e-9));
    CHECK(quote.pool[0][1].value == doctest::Approx(given_01).epsilon(1e-9));
    CHECK(quote.individual[0][0].value == doctest::Approx(own0).epsilon(1e-9));
    // already unemployed and absorbing: the full remaining horizon
    CHECK(quote.individual[0][1].value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pool information shifts the premium in the common-shock model") {
    // the common-shock channel raises the hazard while the neighbour is
    // still employed, so conditioning on (0,0) gives the largest premium
    const PremiumQuote quote = price_closed_form(weak_only_pool(1.0));
    const double p00 = quote.pool[0][0].value;
    const double p01 = quote.pool[0][1].value;
    const double own = quote.individual[0][0].value;
    CHECK(p01 < own);
    CHECK(own < p00);
}

TEST_CASE("sampling and quadrature agree within four standard errors") {
    const PoolModel pool = weak_only_pool(1.0);
    const PremiumQuote mc = price(pool, 100000, 42);
    const PremiumQuote cf = price_closed_form(pool);
    for (int k = 0; k < 2; ++k) {
        for (int s = 0; s < 2; ++s) {
            if (!mc.individual[k][s].defined)
                continue;
            const double tol = std::max(4.0 * mc.individual[k][s].std_error, 1e-9);
            CHECK(std::abs(mc.individual[k][s].value - cf.individual[k][s].value) <= tol);
        }
        for (std::size_t x = 0; x < mc.pool[k].size(); ++x) {
            if (!mc.pool[k][x].defined || !cf.pool[k][x].defined)
                continue;
            const double tol = std::max(4.0 * mc.pool[k][x].std_error, 1e-9);
            CHECK(std::abs(mc.pool[k][x].value - cf.pool[k][x].value) <= tol);
        }
    }
}

TEST_CASE("under conditional independence the pool state is uninformative") {
    const PoolModel pool = independence_pool();
    const PremiumQuote mc = price(pool, 100000, 7);
    const PremiumEstimate& own = mc.individual[0][0];
    for (int other : {0, 1}) {
        const PremiumEstimate& by_pool = mc.pool[0][other];  // (0, other)
        const double se =
            std::sqrt(own.std_error * own.std_error + by_pool.std_error * by_pool.std_error);
        CHECK(std::abs(own.value - by_pool.value) <= 4.0 * se);
    }
}

TEST_CASE("premia are nonnegative and bounded by the remaining horizon") {
    const PremiumQuote mc = price(weak_only_pool(1.0), 20000, 3);
    for (int k = 0; k < 2; ++k) {
        for (const PremiumEstimate& e : mc.individual[k])
            if (e.defined) {
                CHECK(e.value >= 0.0);
                CHECK(e.value <= 0.5 + 1e-12);
            }
        for (const PremiumEstimate& e : mc.pool[k])
            if (e.defined) {
                CHECK(e.value >= 0.0);
                CHECK(e.value <= 0.5 + 1e-12);
            }
    }
}

TEST_CASE("premium given the neighbour's unemployment is monotone in the shock rate") {
    // c = 0 realized by the common-jump construction, then increasing c
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    std::vector<double> given_01, given_00;
    {
        PoolModel base{build_common_jump(grid, one, one, PiecewisePath::constant(grid, 0.0)),
                       0.0, 1.0, 0.5};
        const PremiumQuote q = price_closed_form(base);
        given_01.push_back(q.pool[0][1].value);
        given_00.push_back(q.pool[0][0].value);
    }
    for (double c : {0.5, 1.0}) {
        const PremiumQuote q = price_closed_form(weak_only_pool(c));
        given_01.push_back(q.pool[0][1].value);
        given_00.push_back(q.pool[0][0].value);
    }
    for (std::size_t i = 1; i < given_01.size(); ++i)
        CHECK(given_01[i] >= given_01[i - 1] - 1e-12);
    // where the shock channel acts, the premium strictly increases
    for (std::size_t i = 1; i < given_00.size(); ++i)
        CHECK(given_00[i] > given_00[i - 1] + 1e-6);
}

TEST_CASE("degenerate horizons and extreme discounting") {
    PoolModel at_horizon = weak_only_pool(1.0, 0.0, 1.0);
    const PremiumQuote q1 = price_closed_form(at_horizon);
    CHECK(q1.pool[0][0].value == 0.0);
    const PremiumQuote q1mc = price(at_horizon, 2000, 5);
    CHECK(q1mc.pool[0][0].value == 0.0);

    PoolModel heavy = weak_only_pool(1.0, 1e9, 0.5);
    const PremiumQuote q2 = price_closed_form(heavy);
    CHECK(q2.pool[0][0].value <= 1e-8);
}

TEST_CASE("a pool that starts unemployed earns the full horizon") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    MarginalSpec spec{grid, {ComponentTarget{}, ComponentTarget{}}};
    for (auto& comp : spec.components) {
        comp.cells.assign(grid.num_cells(), fixtures::absorbing_two_state(1.0));
        comp.initial = Vector::Zero(2);
        comp.initial[1] = 1.0;  // start unemployed, state 1 absorbing
    }
    PoolModel pool{build_conditional_independence(spec), 0.0, 1.0, 0.25};
    const PremiumQuote mc = price(pool, 2000, 13);
    CHECK(mc.individual[0][1].defined);
    CHECK(mc.individual[0][1].value == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(mc.individual[0][1].std_error == 0.0);
    const PremiumQuote cf = price_closed_form(pool);
    CHECK(cf.individual[0][1].value == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("three-member independent pool prices per member") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    MarginalSpec spec{grid, {ComponentTarget{}, ComponentTarget{}, ComponentTarget{}}};
    const double rates[3] = {0.5, 1.0, 2.0};
    for (int k = 0; k < 3; ++k) {
        spec.components[k].cells.assign(grid.num_cells(),
                                        fixtures::absorbing_two_state(rates[k]));
        spec.components[k].initial = Vector::Zero(2);
        spec.components[k].initial[0] = 1.0;
    }
    PoolModel pool{build_conditional_independence(spec), 0.0, 1.0, 0.0};
    const PremiumQuote mc = price(pool, 50000, 21);
    const PremiumQuote cf = price_closed_form(pool);
    for (int k = 0; k < 3; ++k) {
        REQUIRE(mc.individual[k][0].defined);
        // int_0^1 (1 - e^{-r u}) du = 1 - (1 - e^{-r}) / r
        const double expected = 1.0 - (1.0 - std::exp(-rates[k])) / rates[k];
        CHECK(std::abs(mc.individual[k][0].value - expected) <=
              4.0 * mc.individual[k][0].std_error);
        CHECK(cf.individual[k][0].value == doctest::Approx(expected).epsilon(1e-9));
        // the other members' states carry no information
        CHECK(std::abs(mc.pool[k][0].value - mc.individual[k][0].value) <=
              4.0 * std::sqrt(mc.pool[k][0].std_error * mc.pool[k][0].std_error +
                              mc.individual[k][0].std_error * mc.individual[k][0].std_error));
    }
}

TEST_CASE("pool model validation") {
    PoolModel pool = weak_only_pool(1.0);
    pool.eval_time = 0.33;  // off the grid
    CHECK_THROWS_AS(pool.validate(), Error);

    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    MarginalSpec spec{grid, {ComponentTarget{}}};
    spec.components[0].cells.assign(grid.num_cells(), Matrix::Zero(3, 3));
    spec.components[0].initial = Vector::Zero(3);
    spec.components[0].initial[0] = 1.0;
    PoolModel three_state{build_conditional_independence(spec), 0.0, 1.0, 0.5};
    CHECK_THROWS_AS(three_state.validate(), DimensionMismatch);

    PoolModel perfect{build_perfect_dependence(fixtures::absorbing_pair_spec(grid, 1.0, 1.0)),
                      0.0, 1.0, 0.5};
    CHECK_THROWS_AS(price_closed_form(perfect), UnsupportedKind);
}
