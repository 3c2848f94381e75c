#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmc/kolmogorov.hpp"
#include "cmc/model.hpp"

namespace cmc {

/// Component states with conditional probability above this threshold count
/// as "on support"; conditional marginals are only determined there.
inline constexpr double kSupportEps = 1e-12;

enum class Verdict { Pass, Fail, NotApplicable };

std::string to_string(Verdict v);

/// A concrete violation: at cell `cell`, the aggregated rates out of full
/// states x and x_bar into component target y_k disagree (lhs vs rhs).
struct Witness {
    std::size_t cell;
    int x;
    int x_bar;
    int y_k;
    double lhs;
    double rhs;
};

/// Per-cell intensity matrix of one component chain, diagonal completed so
/// each row sums to zero.
struct MarginalIntensityPath {
    int component;
    TimeGrid grid;
    std::vector<Matrix> cells;

    Eigen::Index dim() const { return cells.front().rows(); }
};

struct ConsistencyReport {
    int component = 0;
    Verdict algebraic_strong = Verdict::NotApplicable;  // version-level check
    Verdict strong = Verdict::NotApplicable;            // support-restricted check
    Verdict weak_necessary = Verdict::NotApplicable;    // conditional-average marginal exists
    std::vector<Witness> witnesses;
    std::optional<MarginalIntensityPath> marginal;

    bool passed() const;
};

/// Version-level strong consistency: for every cell and every component
/// transition x^k -> y^k, the aggregated rate out of a full state must not
/// depend on the other coordinates. Sufficient for strong consistency under
/// any initial law, but sensitive to the choice of intensity version.
ConsistencyReport check_asm(const CmcModel& model, int k, double tol = kStructuralTol);

/// Support-restricted strong consistency: aggregates only need to agree
/// among full states carrying positive probability (evaluated at cell
/// midpoints). Where a component state has no on-support representative the
/// marginal is undetermined by the law, and the unrestricted agreement is
/// required instead so a single certified marginal version exists.
ConsistencyReport check_sm(const CmcModel& model, int k, double tol = kStructuralTol,
                           double support_eps = kSupportEps);

/// The marginal extracted under a passing version-level check.
/// Throws AsmViolated otherwise.
MarginalIntensityPath extract_strong_marginal(const CmcModel& model, int k,
                                              double tol = kStructuralTol);

/// Conditional-average marginal intensity of component k,
///   lambda^{k;x^k y^k} = sum_x aggregate(x, y^k) pi(x) / pi^k(x^k),
/// evaluated at cell midpoints. Throws SupportViolation when some component
/// state has (numerically) zero probability.
MarginalIntensityPath weak_marginal_intensity(const CmcModel& model, int k,
                                              double support_eps = kSupportEps);

struct WeakOnlyCertificate {
    bool certified = false;
    // present when certified: times and states exhibiting the dependence of
    // the component transition law on the other coordinates
    std::optional<Witness> witness;
    double s = 0.0;
    double t = 0.0;
};

/// Certifies that component k is Markov in its own filtration but not in the
/// full one: the conditional-average marginal must exist, and some pair of
/// full states sharing the k-th coordinate (both on support at s) must give
/// different aggregated component transition probabilities to time t.
WeakOnlyCertificate certify_weak_only(const CmcModel& model, int k,
                                      const std::vector<std::size_t>& s_indices,
                                      const std::vector<std::size_t>& t_indices,
                                      double tol = 1e-9,
                                      double support_eps = kSupportEps);

/// All grid indices, convenience default for certify_weak_only.
std::vector<std::size_t> all_grid_indices(const TimeGrid& grid);

struct LawMatchResult {
    bool pass = false;
    double max_intensity_gap = 0.0;
    double max_initial_gap = 0.0;
};

/// Two component chains have the same conditional law iff their intensity
/// paths agree cell by cell and their initial laws agree.
LawMatchResult check_law_match(const MarginalIntensityPath& lhs, const Vector& lhs_initial,
                               const MarginalIntensityPath& rhs, const Vector& rhs_initial,
                               double tol);

}  // namespace cmc
