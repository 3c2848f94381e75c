#include "cmc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "cmc/errors.hpp"
#include "cmc/estimators.hpp"
#include "cmc/fixtures.hpp"
#include "cmc/model_io.hpp"

namespace cmc {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ensure_out_dir(const std::string& dir) {
    if (!dir.empty())
        fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

int cmd_validate(const RunConfig& cfg) {
    const json j = load_json_file(cfg.config_path);
    try {
        ParsedModel parsed = parse_model_config(j);
        // GeneratorPath construction already validates; re-check against the
        // caller's tolerance to surface a witness at that level
        for (const Matrix& cell : parsed.model.generator.cells())
            validate_generator(cell, cfg.tol);
    } catch (const NegativeOffDiagonal& e) {
        std::printf("invalid: %s\n", e.what());
        return 1;
    } catch (const RowSumNonzero& e) {
        std::printf("invalid: %s\n", e.what());
        return 1;
    } catch (const ConstraintViolated& e) {
        std::printf("invalid: %s\n", e.what());
        return 1;
    }
    std::printf("valid\n");
    return 0;
}

int cmd_solve(const RunConfig& cfg) {
    const json j = load_json_file(cfg.config_path);
    const CmcModel model = model_from_json(j);
    const TransitionField forward = solve_forward(model);
    forward.validate();
    const TransitionField backward = solve_backward(model);
    double gap = 0.0;
    for (std::size_t i = 0; i < model.grid().size(); ++i)
        for (std::size_t k = i; k < model.grid().size(); ++k)
            gap = std::max(gap,
                           (forward.between(i, k) - backward.between(i, k))
                               .cwiseAbs()
                               .maxCoeff());
    ensure_out_dir(cfg.out_dir);
    export_transition_csv(forward, join(cfg.out_dir, "transitions.csv"));
    export_distribution_csv(state_distribution(model), join(cfg.out_dir, "distribution.csv"));
    std::printf("solved %zu grid points, forward/backward gap %.3e\n",
                model.grid().size(), gap);
    return gap <= kOdeTol ? 0 : 1;
}

int cmd_check(const RunConfig& cfg) {
    const json j = load_json_file(cfg.config_path);
    const CmcModel model = model_from_json(j);
    json out = json::array();
    bool all_pass = true;
    for (int k = 0; k < model.space.num_components(); ++k) {
        ConsistencyReport report = check_asm(model, k, cfg.tol);
        const ConsistencyReport sm = check_sm(model, k, cfg.tol);
        report.strong = sm.strong;
        if (!report.marginal && sm.marginal)
            report.marginal = sm.marginal;
        for (const Witness& w : sm.witnesses)
            report.witnesses.push_back(w);
        try {
            weak_marginal_intensity(model, k);
            report.weak_necessary = Verdict::Pass;
        } catch (const SupportViolation&) {
            report.weak_necessary = Verdict::Fail;
        }
        all_pass = all_pass && report.passed();
        out.push_back(report_to_json(report));
        std::printf("component %d: version-level %s, support-restricted %s, "
                    "conditional-average %s\n",
                    k, to_string(report.algebraic_strong).c_str(),
                    to_string(report.strong).c_str(),
                    to_string(report.weak_necessary).c_str());
    }
    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        write_text_file(join(cfg.out_dir, "consistency.json"), out.dump(2) + "\n");
    }
    return all_pass ? 0 : 1;
}

int cmd_build(const RunConfig& cfg) {
    const json j = load_json_file(cfg.config_path);
    ParsedModel parsed = parse_model_config(j);
    if (!parsed.candidate)
        throw ConfigParse("build needs a named copula constructor in the config");
    const CopulaCandidate& cand = *parsed.candidate;
    const PrecopulaReport report = validate_precopula(cand, cand.targets, cfg.tol);
    ensure_out_dir(cfg.out_dir);
    write_text_file(join(cfg.out_dir, "model.json"), model_to_json(cand.model).dump(2) + "\n");
    write_text_file(join(cfg.out_dir, "candidate.json"),
                    candidate_to_json(cand).dump(2) + "\n");
    write_text_file(join(cfg.out_dir, "verdicts.json"),
                    precopula_to_json(report).dump(2) + "\n");
    std::printf("built %s candidate: strong %s, weak %s\n", to_string(cand.kind).c_str(),
                report.strong_pass() ? "pass" : "fail",
                report.weak_pass() ? "pass" : "fail");
    // weak-only candidates legitimately fail the strong route
    const bool ok = cand.kind == CopulaKind::WeakOnly ? report.weak_pass()
                                                      : report.strong_pass();
    return ok ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg) {
    const json j = load_json_file(cfg.config_path);
    const CmcModel model = model_from_json(j);
    const PathBundle bundle = simulate(model, cfg.paths, cfg.seed);
    bundle.validate();
    std::printf("simulated %zu paths to T=%.17g (seed %llu)\n", bundle.num_paths(),
                bundle.horizon(), static_cast<unsigned long long>(bundle.seed));
    std::printf("total jumps %.0f\n", bundle.transition_counts.sum());
    for (int x = 0; x < bundle.dim; ++x)
        std::printf("occupation state %d: %.17g\n", x, bundle.occupation[x]);
    if (cfg.export_paths) {
        ensure_out_dir(cfg.out_dir);
        export_paths_csv(bundle, join(cfg.out_dir, "paths.csv"));
    }
    return 0;
}

void print_estimate(const char* label, const PremiumEstimate& e) {
    if (e.defined)
        std::printf("  %-28s %.6f +/- %.6f  (n=%ld)\n", label, e.value, e.std_error,
                    e.samples);
    else
        std::printf("  %-28s (stratum not observed)\n", label);
}

int cmd_price(const RunConfig& cfg) {
    const json j = load_json_file(cfg.config_path);
    const PoolModel pool = pool_from_json(j);
    const PremiumQuote quote = price(pool, cfg.paths, cfg.seed);
    const ProductStateSpace& space = pool.candidate.model.space;

    std::printf("premium quote: t=%.17g, r=%.17g, benefit=%.17g, n=%zu, seed=%llu\n",
                pool.eval_time, pool.discount_rate, pool.benefit_rate, quote.n_paths,
                static_cast<unsigned long long>(quote.seed));
    for (int k = 0; k < pool.pool_size(); ++k) {
        std::printf("individual %d:\n", k);
        print_estimate("own state employed", quote.individual[k][0]);
        print_estimate("own state unemployed", quote.individual[k][1]);
        for (int x = 0; x < space.dim(); ++x) {
            std::string label = "pool state (";
            const std::vector<int> multi = space.multi_index(x);
            for (std::size_t c = 0; c < multi.size(); ++c)
                label += (c ? "," : "") + std::to_string(multi[c]);
            label += ")";
            print_estimate(label.c_str(), quote.pool[k][x]);
        }
    }
    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        write_text_file(join(cfg.out_dir, "quote.json"),
                        quote_to_json(quote, pool).dump(2) + "\n");
    }
    return 0;
}

// ------------------------------------------------------------------
// reproduce: named fixtures with pass/fail verdicts
// ------------------------------------------------------------------

struct FixtureResult {
    std::string name;
    bool pass = true;
    std::string detail = {};

    void check(bool ok, const std::string& msg) {
        if (!ok)
            pass = false;
        detail += "    " + std::string(ok ? "[ok]   " : "[FAIL] ") + msg + "\n";
    }
};

FixtureResult fixture_flip_lambda() {
    FixtureResult r{"flip-lambda"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const double a = 1.0, b = 0.5;
    Vector mixed = Vector::Zero(4);
    mixed[0] = 0.6;
    mixed[3] = 0.4;
    const CmcModel model =
        fixtures::make_model(grid, fixtures::sync_flip_sparse(a, b), {2, 2}, mixed);

    const ConsistencyReport asm_report = check_asm(model, 0);
    r.check(asm_report.algebraic_strong == Verdict::Fail,
            "version-level strong check fails for the sparse version");
    bool witness_ok = !asm_report.witnesses.empty();
    if (witness_ok) {
        const Witness& w = asm_report.witnesses.front();
        witness_ok = (std::abs(w.lhs - a) < 1e-15 && w.rhs == 0.0) ||
                     (std::abs(w.rhs - a) < 1e-15 && w.lhs == 0.0);
    }
    r.check(witness_ok, "witness exhibits aggregated rates a vs 0");

    const ConsistencyReport sm1 = check_sm(model, 0);
    const ConsistencyReport sm2 = check_sm(model, 1);
    r.check(sm1.strong == Verdict::Pass && sm2.strong == Verdict::Pass,
            "support-restricted check passes under the diagonal initial law");
    bool marginals_ok = sm1.marginal && sm2.marginal;
    if (marginals_ok)
        for (const Matrix& cell : sm1.marginal->cells)
            marginals_ok = marginals_ok && std::abs(cell(0, 1) - a) < 1e-15 &&
                           std::abs(cell(1, 0) - b) < 1e-15;
    r.check(marginals_ok, "extracted marginal rates are a and b");

    const CmcModel off_diag = fixtures::make_model(
        grid, fixtures::sync_flip_sparse(a, b), {2, 2}, InitialLaw::point_mass(4, 1).probs);
    r.check(check_sm(off_diag, 0).strong == Verdict::Fail,
            "support-restricted check fails when started off the diagonal");
    return r;
}

FixtureResult fixture_flip_gamma() {
    FixtureResult r{"flip-gamma"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const double a = 1.0, b = 0.5;
    Vector mixed = Vector::Zero(4);
    mixed[0] = 0.6;
    mixed[3] = 0.4;
    const CmcModel filled =
        fixtures::make_model(grid, fixtures::sync_flip_filled(a, b), {2, 2}, mixed);
    const CmcModel sparse =
        fixtures::make_model(grid, fixtures::sync_flip_sparse(a, b), {2, 2}, mixed);

    const ConsistencyReport a1 = check_asm(filled, 0);
    const ConsistencyReport a2 = check_asm(filled, 1);
    r.check(a1.algebraic_strong == Verdict::Pass && a2.algebraic_strong == Verdict::Pass,
            "version-level strong check passes for the filled version");
    bool marg = a1.marginal && a2.marginal;
    if (marg)
        marg = std::abs(a1.marginal->cells[0](0, 1) - a) < 1e-15 &&
               std::abs(a1.marginal->cells[0](1, 0) - b) < 1e-15 &&
               std::abs(a2.marginal->cells[0](0, 1) - a) < 1e-15 &&
               std::abs(a2.marginal->cells[0](1, 0) - b) < 1e-15;
    r.check(marg, "extracted marginal rates are a and b for both components");

    // same law under the diagonal initial law although the versions differ
    const StateDistributionPath pf = state_distribution(filled);
    const StateDistributionPath ps = state_distribution(sparse);
    double gap = 0.0;
    for (std::size_t i = 0; i < pf.values.size(); ++i)
        gap = std::max(gap, (pf.values[i] - ps.values[i]).cwiseAbs().maxCoeff());
    r.check(gap <= 1e-12, "both intensity versions induce the same state distributions");
    return r;
}

FixtureResult fixture_kron_copula() {
    FixtureResult r{"kron-copula"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const MarginalSpec spec = fixtures::absorbing_pair_spec(grid, 1.0, 2.0);
    const CopulaCandidate cand = build_conditional_independence(spec);

    const PrecopulaReport report = validate_precopula(cand, spec, 1e-12);
    r.check(report.strong_pass(), "strong pre-copula conditions hold");

    bool exact = true;
    for (int k = 0; k < 2; ++k) {
        const MarginalIntensityPath m = extract_strong_marginal(cand.model, k);
        for (std::size_t i = 0; i < m.cells.size(); ++i)
            exact = exact &&
                    (m.cells[i] - spec.components[k].cells[i]).cwiseAbs().maxCoeff() == 0.0;
    }
    r.check(exact, "strong marginals equal the targets exactly");

    // product structure of the field
    const TransitionField field = solve_forward(cand.model);
    const CmcModel m1 = fixtures::make_model(grid, fixtures::absorbing_two_state(1.0), {2},
                                             spec.components[0].initial);
    const CmcModel m2 = fixtures::make_model(grid, fixtures::absorbing_two_state(2.0), {2},
                                             spec.components[1].initial);
    const TransitionField f1 = solve_forward(m1);
    const TransitionField f2 = solve_forward(m2);
    double gap = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i; j < grid.size(); ++j)
            gap = std::max(gap, (field.between(i, j) -
                                 kron(f1.between(i, j), f2.between(i, j)))
                                    .cwiseAbs()
                                    .maxCoeff());
    r.check(gap <= 1e-8, "product field equals the product of component fields");
    return r;
}

FixtureResult fixture_common_jump() {
    FixtureResult r{"common-jump"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.25);
    const PiecewisePath a = PiecewisePath::constant(grid, 1.0);
    const PiecewisePath b = PiecewisePath::constant(grid, 2.0);

    std::vector<MarginalIntensityPath> marginals;
    bool strong_all = true;
    for (double c : {0.0, 0.25, 0.5}) {
        const CopulaCandidate cand =
            build_common_jump(grid, a, b, PiecewisePath::constant(grid, c));
        const PrecopulaReport report = validate_precopula(cand, cand.targets, 1e-12);
        strong_all = strong_all && report.strong_pass();
        marginals.push_back(extract_strong_marginal(cand.model, 0));
        marginals.push_back(extract_strong_marginal(cand.model, 1));
    }
    r.check(strong_all, "strong pre-copula conditions hold for c in {0, 0.25, 0.5}");

    bool same = true;
    for (std::size_t i = 2; i < marginals.size(); ++i)
        for (std::size_t cell = 0; cell < marginals[i].cells.size(); ++cell)
            same = same && (marginals[i].cells[cell] - marginals[i % 2].cells[cell])
                                   .cwiseAbs()
                                   .maxCoeff() == 0.0;
    r.check(same, "every admissible c shares identical strong marginals");
    return r;
}

FixtureResult fixture_weak_only() {
    FixtureResult r{"weak-only"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    const CopulaCandidate cand = build_weak_only(grid, one, one, one);

    double gap = 0.0;
    for (int k = 0; k < 2; ++k) {
        const MarginalIntensityPath weak = weak_marginal_intensity(cand.model, k);
        for (std::size_t i = 0; i < weak.cells.size(); ++i)
            gap = std::max(gap, (weak.cells[i] - cand.targets.components[k].cells[i])
                                    .cwiseAbs()
                                    .maxCoeff());
    }
    r.check(gap <= 1e-7, "conditional-average marginals match the implied targets");

    const auto idx = all_grid_indices(grid);
    const WeakOnlyCertificate cert = certify_weak_only(cand.model, 0, idx, idx);
    r.check(cert.certified, "weak-only certified: true (c=1)");

    const CopulaCandidate indep =
        build_common_jump(grid, one, one, PiecewisePath::constant(grid, 0.0));
    const WeakOnlyCertificate cert0 = certify_weak_only(indep.model, 0, idx, idx);
    r.check(!cert0.certified, "weak-only certified: false (c=0)");

    const WeakOnlyDecomposition dec = decompose_weak_only(cand);
    double rec = 0.0;
    for (std::size_t i = 0; i < grid.num_cells(); ++i) {
        const Matrix sum = dec.kron_sum_part[i] + dec.joint_shock[i] - dec.adjust_first[i] -
                           dec.adjust_second[i];
        rec = std::max(rec, (sum - cand.model.generator.cell(i)).cwiseAbs().maxCoeff());
    }
    r.check(rec <= 1e-10, "additive decomposition reconstructs the intensity");
    return r;
}

FixtureResult fixture_premium(const RunConfig& cfg) {
    FixtureResult r{"premium"};
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.05);
    const PiecewisePath one = PiecewisePath::constant(grid, 1.0);
    PoolModel pool{build_weak_only(grid, one, one, one), 0.0, 1.0, 0.5};

    const PremiumQuote mc = price(pool, cfg.paths, cfg.seed);
    const PremiumQuote cf = price_closed_form(pool);

    const PremiumEstimate& ind = mc.individual[0][0];
    const PremiumEstimate& p00 = mc.pool[0][0];  // pool state (0,0)
    const PremiumEstimate& p01 = mc.pool[0][1];  // pool state (0,1)
    r.check(ind.defined && p00.defined && p01.defined, "all strata observed");

    auto separated = [](const PremiumEstimate& x, const PremiumEstimate& y) {
        return std::abs(x.value - y.value) >
               4.0 * std::sqrt(x.std_error * x.std_error + y.std_error * y.std_error);
    };
    r.check(separated(p00, ind) && separated(ind, p01) && separated(p00, p01),
            "pool-state conditioning shifts the premium beyond 4 standard errors");

    // degenerate strata (already absorbed) have zero sampling error; allow
    // quadrature round-off there
    auto close = [](const PremiumEstimate& sampled, const PremiumEstimate& exact) {
        return std::abs(sampled.value - exact.value) <=
               std::max(4.0 * sampled.std_error, 1e-9);
    };
    bool agree = true;
    for (int k = 0; k < 2; ++k) {
        for (int s = 0; s < 2; ++s)
            if (mc.individual[k][s].defined && cf.individual[k][s].defined)
                agree = agree && close(mc.individual[k][s], cf.individual[k][s]);
        for (std::size_t x = 0; x < mc.pool[k].size(); ++x)
            if (mc.pool[k][x].defined && cf.pool[k][x].defined)
                agree = agree && close(mc.pool[k][x], cf.pool[k][x]);
    }
    r.check(agree, "sampled premia agree with the quadrature route within 4 SE");

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "measured: pool(0,0)=%.6f, individual(own=0)=%.6f, pool(0,1)=%.6f",
                  p00.value, ind.value, p01.value);
    r.detail += "    " + std::string(buf) + "\n";
    return r;
}

int cmd_reproduce(const RunConfig& cfg) {
    std::vector<FixtureResult> results;
    results.push_back(fixture_flip_lambda());
    results.push_back(fixture_flip_gamma());
    results.push_back(fixture_kron_copula());
    results.push_back(fixture_common_jump());
    results.push_back(fixture_weak_only());
    results.push_back(fixture_premium(cfg));

    bool all = true;
    for (const FixtureResult& r : results) {
        std::printf("%s %s\n%s", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%s\n", all ? "all fixtures pass" : "some fixtures failed");
    return all ? 0 : 1;
}

}  // namespace

int run(const RunConfig& config) {
    try {
        if (config.command == "validate")
            return cmd_validate(config);
        if (config.command == "solve")
            return cmd_solve(config);
        if (config.command == "check")
            return cmd_check(config);
        if (config.command == "build")
            return cmd_build(config);
        if (config.command == "simulate")
            return cmd_simulate(config);
        if (config.command == "price")
            return cmd_price(config);
        if (config.command == "reproduce")
            return cmd_reproduce(config);
        std::fprintf(stderr, "unknown command %s\n", config.command.c_str());
        return 2;
    } catch (const ConfigParse& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace cmc
