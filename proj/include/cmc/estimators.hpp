#pragma once

#include <vector>

#include "cmc/simulate.hpp"
#include "cmc/state_space.hpp"

namespace cmc {

/// Empirical transition matrix between two times: row x holds the relative
/// frequencies of the time-t state among paths sitting at x at time s.
/// Rows of states never visited at s are identity rows with the flag unset.
struct EmpiricalTransition {
    Matrix probs;
    Matrix std_error;
    std::vector<long> row_counts;
    std::vector<bool> visited;
};

EmpiricalTransition empirical_transition(const PathBundle& bundle, double s, double t);

/// Mean over paths of  C^{xy}(0,T) - int_0^T 1{X_u = x} lambda^{xy}_u du.
/// Zero in expectation when the intensity compensates the counting process;
/// the z-score is the mean in units of its standard error.
struct CompensatorReport {
    double mean = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    double mean_count = 0.0;
    double mean_compensator = 0.0;
};

CompensatorReport compensator_residual(const PathBundle& bundle, const CmcModel& model,
                                       int x, int y);

/// Two-time stratification test of the component Markov property. Among
/// paths with X^k_s = x^k, the distribution of X^k_t must not depend on the
/// chosen stratification: by the full time-s state (fails when the component
/// is Markov only in its own filtration) or by the component's own earlier
/// state at s - lag (must never show an effect when the component law is
/// Markov in the component filtration). Buckets below min_bucket paths are
/// skipped. Only two-time laws are examined.
struct StratificationReport {
    double max_z = 0.0;
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 1.0;
    int buckets_used = 0;
    int buckets_skipped = 0;
};

struct WeakMarkovReport {
    StratificationReport full_state;
    StratificationReport own_history;
};

WeakMarkovReport empirical_weak_markov_test(const PathBundle& bundle,
                                            const ProductStateSpace& space, int k,
                                            double s, double t, double lag,
                                            long min_bucket = 25);

/// Upper regularized incomplete gamma Q(a, x); chi-square tail probability
/// is Q(dof/2, stat/2).
double gamma_q(double a, double x);

double chi_square_tail(double stat, int dof);

}  // namespace cmc
