#pragma once

#include <cstdint>
#include <vector>

#include "cmc/copulae.hpp"

namespace cmc {

/// Pool of individuals whose employment-status chains are coupled by a
/// copula candidate over {employed = 0, unemployed = 1}^N. The insured
/// payoff per individual is the discounted time spent unemployed on [t, T]:
///   Phi_k = benefit_rate * int_t^T e^{-r(u-t)} 1{Y^k_u = 1} du.
struct PoolModel {
    CopulaCandidate candidate;
    double discount_rate = 0.0;   // r, 1/year
    double benefit_rate = 1.0;    // currency/year
    double eval_time = 0.0;       // t, must lie on the grid

    void validate() const;
    int pool_size() const { return candidate.model.space.num_components(); }
};

struct PremiumEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
    bool defined = false;  // false when the stratum was never observed
};

/// Premia per individual, conditioned two ways: on the individual's own
/// time-t state (component filtration) and on the whole pool's time-t state
/// (pool filtration), realized by stratifying paths on the time-t state.
struct PremiumQuote {
    // individual[k][own_state in {0, 1}]
    std::vector<std::vector<PremiumEstimate>> individual;
    // pool[k][flat pool state]
    std::vector<std::vector<PremiumEstimate>> pool;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Monte Carlo premium evaluation.
PremiumQuote price(const PoolModel& pool, std::size_t n_paths, std::uint64_t seed);

/// Quadrature route through the transition field (no sampling); standard
/// errors are zero. Supports the two-state constructions whose fields this
/// library solves: common-jump, weak-only and conditional independence.
PremiumQuote price_closed_form(const PoolModel& pool);

}  // namespace cmc
