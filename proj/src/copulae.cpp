#include "cmc/copulae.hpp"

#include <cmath>

#include "cmc/errors.hpp"

namespace cmc {

std::string to_string(CopulaKind kind) {
    switch (kind) {
        case CopulaKind::ConditionalIndependence: return "conditional-independence";
        case CopulaKind::CommonJump: return "common-jump";
        case CopulaKind::PerfectDependence: return "perfect-dependence";
        case CopulaKind::WeakOnly: return "weak-only";
        default: return "custom";
    }
}

void MarginalSpec::validate(double tol) const {
    if (components.empty())
        throw DimensionMismatch("marginal spec needs at least one component");
    for (const ComponentTarget& c : components) {
        if (c.cells.size() != grid.num_cells())
            throw DimensionMismatch("component target needs one cell per grid cell");
        for (const Matrix& m : c.cells)
            validate_generator(m, tol);
        InitialLaw check(c.initial, tol);  // validates nonnegativity and mass
        if (check.dim() != c.cells.front().rows())
            throw DimensionMismatch("component initial law has wrong dimension");
    }
}

namespace {

ProductStateSpace space_of(const MarginalSpec& spec) {
    std::vector<int> sizes;
    sizes.reserve(spec.components.size());
    for (const ComponentTarget& c : spec.components)
        sizes.push_back(static_cast<int>(c.cells.front().rows()));
    return ProductStateSpace(std::move(sizes));
}

Vector product_law(const MarginalSpec& spec, const ProductStateSpace& space) {
    Vector law = Vector::Ones(space.dim());
    for (int x = 0; x < space.dim(); ++x) {
        const std::vector<int> multi = space.multi_index(x);
        for (int k = 0; k < space.num_components(); ++k)
            law[x] *= spec.components[k].initial[multi[k]];
    }
    return law;
}

Vector law_margin(const Vector& joint, const ProductStateSpace& space, int k) {
    Vector m = Vector::Zero(space.component_size(k));
    for (int x = 0; x < space.dim(); ++x)
        m[space.coordinate(x, k)] += joint[x];
    return m;
}

}  // namespace

CopulaCandidate build_conditional_independence(const MarginalSpec& spec,
                                               const std::optional<Vector>& joint_initial,
                                               double margin_tol) {
    spec.validate();
    ProductStateSpace space = space_of(spec);

    std::vector<Matrix> cells;
    cells.reserve(spec.grid.num_cells());
    for (std::size_t i = 0; i < spec.grid.num_cells(); ++i) {
        std::vector<Matrix> comps;
        comps.reserve(spec.components.size());
        for (const ComponentTarget& c : spec.components)
            comps.push_back(c.cells[i]);
        cells.push_back(kron_sum(comps));
    }

    Vector law;
    InitialLawProvenance prov;
    if (joint_initial) {
        if (joint_initial->size() != space.dim())
            throw DimensionMismatch("joint initial law has wrong dimension");
        for (int k = 0; k < space.num_components(); ++k) {
            const Vector gap = law_margin(*joint_initial, space, k) - spec.components[k].initial;
            if (gap.cwiseAbs().maxCoeff() > margin_tol)
                throw ConstraintViolated("joint initial law margin " + std::to_string(k) +
                                         " does not match the component law");
        }
        law = *joint_initial;
        prov = InitialLawProvenance::SuppliedJointLaw;
    } else {
        law = product_law(spec, space);
        prov = InitialLawProvenance::ProductLaw;
    }

    CmcModel model(space, GeneratorPath(FactorScenario(spec.grid), std::move(cells)),
                   InitialLaw(std::move(law)));
    return CopulaCandidate{std::move(model), CopulaKind::ConditionalIndependence, spec, prov};
}

CopulaCandidate build_common_jump(const TimeGrid& grid, const PiecewisePath& a,
                                  const PiecewisePath& b, const PiecewisePath& c,
                                  double tol) {
    MarginalSpec spec{grid, {}};
    std::vector<Matrix> cells;
    cells.reserve(grid.num_cells());
    ComponentTarget first, second;
    for (std::size_t i = 0; i < grid.num_cells(); ++i) {
        const double ai = a.cell(i), bi = b.cell(i), ci = c.cell(i);
        if (ci < -tol || ci > std::min(ai, bi) + tol)
            throw ConstraintViolated("common-jump rate must satisfy 0 <= c <= min(a, b), got c=" +
                                     std::to_string(ci) + " in cell " + std::to_string(i));
        Matrix L(4, 4);
        L << -(ai + bi - ci), bi - ci, ai - ci, ci,
            0.0, -ai, 0.0, ai,
            0.0, 0.0, -bi, bi,
            0.0, 0.0, 0.0, 0.0;
        cells.push_back(std::move(L));

        Matrix psi1(2, 2), psi2(2, 2);
        psi1 << -ai, ai, 0.0, 0.0;
        psi2 << -bi, bi, 0.0, 0.0;
        first.cells.push_back(std::move(psi1));
        second.cells.push_back(std::move(psi2));
    }
    first.initial = Vector::Zero(2);
    first.initial[0] = 1.0;
    second.initial = first.initial;
    spec.components = {std::move(first), std::move(second)};

    CmcModel model(ProductStateSpace({2, 2}),
                   GeneratorPath(FactorScenario(grid), std::move(cells)),
                   InitialLaw::point_mass(4, 0));
    return CopulaCandidate{std::move(model), CopulaKind::CommonJump, std::move(spec),
                           InitialLawProvenance::ProductLaw};
}

CopulaCandidate build_perfect_dependence(const MarginalSpec& spec, double tol) {
    spec.validate();
    const int n = spec.num_components();
    const ComponentTarget& base = spec.components.front();
    for (const ComponentTarget& c : spec.components) {
        if (c.cells.front().rows() != base.cells.front().rows())
            throw HeterogeneousMarginals("perfect dependence needs one shared state space");
        for (std::size_t i = 0; i < c.cells.size(); ++i)
            if ((c.cells[i] - base.cells[i]).cwiseAbs().maxCoeff() > tol)
                throw HeterogeneousMarginals("perfect dependence needs identical intensities");
        if ((c.initial - base.initial).cwiseAbs().maxCoeff() > tol)
            throw HeterogeneousMarginals("perfect dependence needs identical initial laws");
    }

    const int s1 = static_cast<int>(base.cells.front().rows());
    ProductStateSpace space(std::vector<int>(n, s1));

    // diagonal embedding: only x -> y with all coordinates moving together
    std::vector<int> diag_states(s1);
    for (int v = 0; v < s1; ++v)
        diag_states[v] = space.flat_index(std::vector<int>(n, v));

    std::vector<Matrix> cells;
    cells.reserve(spec.grid.num_cells());
    for (std::size_t i = 0; i < spec.grid.num_cells(); ++i) {
        Matrix L = Matrix::Zero(space.dim(), space.dim());
        for (int v = 0; v < s1; ++v)
            for (int w = 0; w < s1; ++w)
                if (v != w)
                    L(diag_states[v], diag_states[w]) = base.cells[i](v, w);
        complete_diagonal(L);
        cells.push_back(std::move(L));
    }

    Vector law = Vector::Zero(space.dim());
    for (int v = 0; v < s1; ++v)
        law[diag_states[v]] = base.initial[v];

    CmcModel model(space, GeneratorPath(FactorScenario(spec.grid), std::move(cells)),
                   InitialLaw(std::move(law)));
    return CopulaCandidate{std::move(model), CopulaKind::PerfectDependence, spec,
                           InitialLawProvenance::SuppliedJointLaw};
}

CopulaCandidate build_weak_only(const TimeGrid& grid, const PiecewisePath& a,
                                const PiecewisePath& b, const PiecewisePath& c) {
    std::vector<Matrix> cells;
    cells.reserve(grid.num_cells());
    for (std::size_t i = 0; i < grid.num_cells(); ++i) {
        const double ai = a.cell(i), bi = b.cell(i), ci = c.cell(i);
        if (!(ai > 0.0) || !(bi > 0.0) || !(ci > 0.0))
            throw NonPositiveRate("weak-only construction needs strictly positive rates, cell " +
                                  std::to_string(i));
        Matrix L(4, 4);
        L << -(ai + bi + ci), bi, ai, ci,
            0.0, -ai, 0.0, ai,
            0.0, 0.0, -bi, bi,
            0.0, 0.0, 0.0, 0.0;
        cells.push_back(std::move(L));
    }

    // Implied marginal targets from the closed-form occupation weights,
    // sampled at cell midpoints like every other piecewise-constant object.
    MarginalSpec spec{grid, {ComponentTarget{}, ComponentTarget{}}};
    for (std::size_t i = 0; i < grid.num_cells(); ++i) {
        const double m = grid.cell_midpoint(i);
        const double delta =
            std::exp(-(a.integral(0, m) + b.integral(0, m) + c.integral(0, m)));
        const double alpha = weak_only_alpha(a, b, c, 0.0, m);
        const double beta = weak_only_alpha(b, a, c, 0.0, m);
        const double rate1 = (a.cell(i) + c.cell(i)) - c.cell(i) * alpha / (delta + alpha);
        const double rate2 = (b.cell(i) + c.cell(i)) - c.cell(i) * beta / (delta + beta);
        Matrix psi1(2, 2), psi2(2, 2);
        psi1 << -rate1, rate1, 0.0, 0.0;
        psi2 << -rate2, rate2, 0.0, 0.0;
        spec.components[0].cells.push_back(std::move(psi1));
        spec.components[1].cells.push_back(std::move(psi2));
    }
    spec.components[0].initial = Vector::Zero(2);
    spec.components[0].initial[0] = 1.0;
    spec.components[1].initial = spec.components[0].initial;

    CmcModel model(ProductStateSpace({2, 2}),
                   GeneratorPath(FactorScenario(grid), std::move(cells)),
                   InitialLaw::point_mass(4, 0));
    return CopulaCandidate{std::move(model), CopulaKind::WeakOnly, std::move(spec),
                           InitialLawProvenance::ProductLaw};
}

bool PrecopulaReport::strong_pass() const {
    return strong_aggregation == Verdict::Pass && strong_canonical == Verdict::Pass &&
           strong_initial_invariance == Verdict::Pass &&
           strong_initial_margins == Verdict::Pass;
}

bool PrecopulaReport::weak_pass() const {
    return weak_canonical == Verdict::Pass && weak_initial_invariance == Verdict::Pass &&
           weak_initial_margins == Verdict::Pass && weak_marginal_match == Verdict::Pass;
}

PrecopulaReport validate_precopula(const CopulaCandidate& candidate, const MarginalSpec& spec,
                                   double tol) {
    spec.validate();
    const CmcModel& model = candidate.model;
    const ProductStateSpace& space = model.space;
    if (spec.num_components() != space.num_components())
        throw DimensionMismatch("spec does not match the candidate's state space");

    PrecopulaReport report;

    // canonical conditions: generator validity per cell plus integrability;
    // validity already holds by GeneratorPath construction, re-checked here
    // against the caller's tolerance
    report.strong_canonical = Verdict::Pass;
    for (const Matrix& cell : model.generator.cells())
        if (!is_valid_generator(cell, tol))
            report.strong_canonical = Verdict::Fail;
    if (!std::isfinite(model.generator.total_activity()))
        report.strong_canonical = Verdict::Fail;
    report.weak_canonical = report.strong_canonical;

    // the initial law is a single fixed vector, hence factor-invariant by
    // construction
    report.strong_initial_invariance = Verdict::Pass;
    report.weak_initial_invariance = Verdict::Pass;

    report.strong_initial_margins = Verdict::Pass;
    for (int k = 0; k < space.num_components(); ++k) {
        const Vector gap =
            law_margin(model.initial.probs, space, k) - spec.components[k].initial;
        if (gap.cwiseAbs().maxCoeff() > tol)
            report.strong_initial_margins = Verdict::Fail;
    }
    report.weak_initial_margins = report.strong_initial_margins;

    // strong route: aggregated rates must reproduce the targets for every
    // full state, cell by cell
    report.strong_aggregation = Verdict::Pass;
    for (std::size_t cell = 0; cell < model.generator.num_cells(); ++cell) {
        const Matrix& L = model.generator.cell(cell);
        for (int k = 0; k < space.num_components(); ++k) {
            const Matrix& psi = spec.components[k].cells[cell];
            const Matrix agg_full = marginal_aggregate(L, space, k);
            for (int x = 0; x < space.dim(); ++x) {
                const int xk = space.coordinate(x, k);
                for (int yk = 0; yk < space.component_size(k); ++yk) {
                    if (yk == xk)
                        continue;
                    // off-diagonal part of the aggregate: subtract nothing,
                    // x contributes only to its own coordinate column
                    const double got = agg_full(x, yk);
                    if (std::abs(got - psi(xk, yk)) > tol) {
                        report.strong_aggregation = Verdict::Fail;
                        report.witnesses.push_back({cell, x, -1, yk, got, psi(xk, yk)});
                    }
                }
            }
        }
    }

    // weak route: conditional-average marginals within tol
    report.weak_marginal_match = Verdict::Pass;
    for (int k = 0; k < space.num_components(); ++k) {
        try {
            const MarginalIntensityPath weak = weak_marginal_intensity(model, k);
            for (std::size_t cell = 0; cell < weak.cells.size(); ++cell) {
                const double gap =
                    (weak.cells[cell] - spec.components[k].cells[cell]).cwiseAbs().maxCoeff();
                if (gap > tol) {
                    report.weak_marginal_match = Verdict::Fail;
                    report.witnesses.push_back({cell, -1, -1, k, gap, 0.0});
                }
            }
        } catch (const SupportViolation&) {
            report.weak_marginal_match = Verdict::Fail;
        }
    }

    return report;
}

AbsorbingPairRates recover_pair_rates(const CopulaCandidate& candidate) {
    const GeneratorPath& gen = candidate.model.generator;
    if (gen.dim() != 4)
        throw WrongKind("rate recovery needs a two-by-two product candidate");
    std::vector<double> a, b, c;
    a.reserve(gen.num_cells());
    b.reserve(gen.num_cells());
    c.reserve(gen.num_cells());
    for (const Matrix& L : gen.cells()) {
        // row (0,1) carries the bare first-component rate, row (1,0) the
        // second one, entry (0,0)->(1,1) the common-shock rate
        a.push_back(L(1, 3));
        b.push_back(L(2, 3));
        c.push_back(L(0, 3));
    }
    const TimeGrid& grid = gen.grid();
    return AbsorbingPairRates{PiecewisePath(grid, std::move(a)),
                              PiecewisePath(grid, std::move(b)),
                              PiecewisePath(grid, std::move(c))};
}

WeakOnlyDecomposition decompose_weak_only(const CopulaCandidate& candidate) {
    if (candidate.kind != CopulaKind::WeakOnly)
        throw WrongKind("decomposition applies to weak-only candidates");
    const AbsorbingPairRates rates = recover_pair_rates(candidate);
    const TimeGrid& grid = candidate.model.grid();

    WeakOnlyDecomposition dec;
    for (std::size_t i = 0; i < grid.num_cells(); ++i) {
        dec.kron_sum_part.push_back(
            kron_sum({candidate.targets.components[0].cells[i],
                      candidate.targets.components[1].cells[i]}));

        const double m = grid.cell_midpoint(i);
        const double delta = std::exp(-(rates.a.integral(0, m) + rates.b.integral(0, m) +
                                        rates.c.integral(0, m)));
        const double alpha = weak_only_alpha(rates.a, rates.b, rates.c, 0.0, m);
        const double beta = weak_only_alpha(rates.b, rates.a, rates.c, 0.0, m);
        const double ci = rates.c.cell(i);
        const double w1 = ci * delta / (delta + beta);   // component-1 excess
        const double w2 = ci * delta / (delta + alpha);  // component-2 excess

        Matrix joint = Matrix::Zero(4, 4);
        joint(0, 0) = -ci;
        joint(0, 3) = ci;

        Matrix adj1 = Matrix::Zero(4, 4);
        adj1(0, 0) = -w1;
        adj1(0, 1) = w1;
        adj1(2, 2) = -w1;
        adj1(2, 3) = w1;

        Matrix adj2 = Matrix::Zero(4, 4);
        adj2(0, 0) = -w2;
        adj2(0, 2) = w2;
        adj2(1, 1) = -w2;
        adj2(1, 3) = w2;

        dec.joint_shock.push_back(std::move(joint));
        dec.adjust_first.push_back(std::move(adj1));
        dec.adjust_second.push_back(std::move(adj2));
    }
    return dec;
}

}  // namespace cmc
