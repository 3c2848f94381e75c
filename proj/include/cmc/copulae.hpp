#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmc/consistency.hpp"
#include "cmc/model.hpp"

namespace cmc {

/// Per-component target: intensity path over the component space plus the
/// component initial law.
struct ComponentTarget {
    std::vector<Matrix> cells;  // one generator per grid cell
    Vector initial;
};

/// Prescribed marginal laws for a product-space construction. All components
/// share the product grid.
struct MarginalSpec {
    TimeGrid grid;
    std::vector<ComponentTarget> components;

    int num_components() const { return static_cast<int>(components.size()); }
    void validate(double tol = kStructuralTol) const;
};

enum class CopulaKind {
    ConditionalIndependence,
    CommonJump,
    PerfectDependence,
    WeakOnly,
    Custom,
};

std::string to_string(CopulaKind kind);

enum class InitialLawProvenance { ProductLaw, SuppliedJointLaw };

/// A product-space model built to reproduce prescribed marginals, together
/// with those targets (prescribed for the strong constructions, implied for
/// the weak-only one).
struct CopulaCandidate {
    CmcModel model;
    CopulaKind kind;
    MarginalSpec targets;
    InitialLawProvenance initial_provenance;
};

/// Components evolve independently given the factor path: the product-space
/// intensity is the Kronecker sum of the targets and the default initial law
/// is the product law. A joint initial law may be supplied instead; its
/// margins must match the targets within margin_tol.
CopulaCandidate build_conditional_independence(const MarginalSpec& spec,
                                               const std::optional<Vector>& joint_initial = {},
                                               double margin_tol = kStructuralTol);

/// Two absorbing two-state components with a common-shock channel of rate c,
/// 0 <= c <= min(a, b) cellwise. Both components start at state 0 and their
/// marginal intensities are exactly [[-a, a], [0, 0]] and [[-b, b], [0, 0]].
CopulaCandidate build_common_jump(const TimeGrid& grid, const PiecewisePath& a,
                                  const PiecewisePath& b, const PiecewisePath& c,
                                  double tol = kStructuralTol);

/// All components are pathwise copies of the first: the product intensity is
/// supported on the diagonal and the initial law sits on diagonal states.
/// All targets in the spec must be identical.
CopulaCandidate build_perfect_dependence(const MarginalSpec& spec,
                                         double tol = kStructuralTol);

/// The absorbing common-shock construction whose components are Markov in
/// their own filtrations but not in the full one (for c > 0): product
/// intensity rows [-(a+b+c), b, a, c; 0, -a, 0, a; 0, 0, -b, b; 0,0,0,0],
/// start at (0,0). The returned targets are the implied marginal intensities
/// computed from the closed-form occupation probabilities at cell midpoints.
CopulaCandidate build_weak_only(const TimeGrid& grid, const PiecewisePath& a,
                                const PiecewisePath& b, const PiecewisePath& c);

struct PrecopulaReport {
    // strong route: marginal aggregation, canonical conditions, initial law
    // scenario independence, initial margins
    Verdict strong_aggregation = Verdict::NotApplicable;
    Verdict strong_canonical = Verdict::NotApplicable;
    Verdict strong_initial_invariance = Verdict::NotApplicable;
    Verdict strong_initial_margins = Verdict::NotApplicable;
    // weak route: canonical conditions, initial law scenario independence,
    // initial margins, conditional-average marginal match
    Verdict weak_canonical = Verdict::NotApplicable;
    Verdict weak_initial_invariance = Verdict::NotApplicable;
    Verdict weak_initial_margins = Verdict::NotApplicable;
    Verdict weak_marginal_match = Verdict::NotApplicable;

    std::vector<Witness> witnesses;  // aggregation / marginal-match failures

    bool strong_pass() const;
    bool weak_pass() const;
};

/// Checks the candidate against the prescribed marginals, both as a strong
/// pre-copula (exact aggregation) and as a weak one (conditional-average
/// marginals within tol).
PrecopulaReport validate_precopula(const CopulaCandidate& candidate,
                                   const MarginalSpec& spec, double tol);

/// Additive split of a weak-only candidate's intensity into the Kronecker
/// sum of its implied marginals plus the dependence adjustments:
///   L = kron_sum(Psi1, Psi2) + joint - adjust1 - adjust2, cell by cell.
struct WeakOnlyDecomposition {
    std::vector<Matrix> kron_sum_part;
    std::vector<Matrix> joint_shock;    // mass moved onto the common jump
    std::vector<Matrix> adjust_first;   // excess idiosyncratic rate, component 1
    std::vector<Matrix> adjust_second;  // excess idiosyncratic rate, component 2
};

WeakOnlyDecomposition decompose_weak_only(const CopulaCandidate& candidate);

/// Per-cell rates recovered from the stored intensity cells of a common-jump
/// or weak-only candidate.
struct AbsorbingPairRates {
    PiecewisePath a, b, c;
};

AbsorbingPairRates recover_pair_rates(const CopulaCandidate& candidate);

}  // namespace cmc
