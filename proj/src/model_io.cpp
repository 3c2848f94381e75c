#include "cmc/model_io.hpp"

#include <cstdio>
#include <fstream>

#include "cmc/errors.hpp"

namespace cmc {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            rows.push_back(m(i, j));
    return rows;
}

Matrix matrix_from_json(const json& j, Eigen::Index dim) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != dim * dim)
        throw ConfigParse("matrix needs " + std::to_string(dim * dim) + " row-major entries");
    Matrix m(dim, dim);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index jj = 0; jj < dim; ++jj)
            m(i, jj) = j[idx++].get<double>();
    return m;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array())
        throw ConfigParse("expected an array of numbers");
    Vector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

TimeGrid grid_from_json(const json& j) {
    if (!j.contains("grid"))
        throw ConfigParse("missing grid");
    std::vector<double> pts = j.at("grid").get<std::vector<double>>();
    return TimeGrid(std::move(pts));
}

PiecewisePath rate_from_json(const json& j, const TimeGrid& grid, const char* name) {
    if (!j.contains(name))
        throw ConfigParse(std::string("missing rate ") + name);
    const json& v = j.at(name);
    if (v.is_number())
        return PiecewisePath::constant(grid, v.get<double>());
    return PiecewisePath(grid, v.get<std::vector<double>>());
}

ComponentTarget component_from_json(const json& j, const TimeGrid& grid) {
    ComponentTarget target;
    target.initial = vector_from_json(j.at("initial"));
    const Eigen::Index dim = target.initial.size();
    const json& cells = j.at("cells");
    if (cells.size() == 1) {
        // single matrix broadcast to every cell
        target.cells.assign(grid.num_cells(), matrix_from_json(cells[0], dim));
    } else {
        if (cells.size() != grid.num_cells())
            throw ConfigParse("component needs one cell matrix per grid cell");
        for (const json& c : cells)
            target.cells.push_back(matrix_from_json(c, dim));
    }
    return target;
}

MarginalSpec spec_from_json(const json& j, const TimeGrid& grid) {
    MarginalSpec spec{grid, {}};
    for (const json& c : j.at("components"))
        spec.components.push_back(component_from_json(c, grid));
    return spec;
}

}  // namespace

json model_to_json(const CmcModel& model) {
    json j;
    j["schema"] = kModelSchema;
    json comps = json::array();
    for (int k = 0; k < model.space.num_components(); ++k)
        comps.push_back(model.space.component_size(k));
    j["components"] = comps;
    j["grid"] = model.grid().points();
    json cells = json::array();
    for (const Matrix& c : model.generator.cells())
        cells.push_back(matrix_to_json(c));
    j["generator"] = {{"kind", "cells"}, {"cells", cells}};
    json law = json::array();
    for (Eigen::Index i = 0; i < model.initial.probs.size(); ++i)
        law.push_back(model.initial.probs[i]);
    j["initial_law"] = law;
    if (!model.generator.scenario().values.empty()) {
        json values = json::array();
        for (const Vector& v : model.generator.scenario().values) {
            json row = json::array();
            for (Eigen::Index i = 0; i < v.size(); ++i)
                row.push_back(v[i]);
            values.push_back(row);
        }
        j["scenario"] = {{"values", values}};
    }
    return j;
}

ParsedModel parse_model_config(const json& j) {
    if (j.value("schema", "") != kModelSchema)
        throw ConfigParse("expected schema " + std::string(kModelSchema));
    const TimeGrid grid = grid_from_json(j);
    const json& gen = j.at("generator");
    const std::string kind = gen.value("kind", "cells");

    if (kind == "cells") {
        if (!j.contains("components"))
            throw ConfigParse("missing components");
        ProductStateSpace space(j.at("components").get<std::vector<int>>());
        std::vector<Matrix> cells;
        const json& jcells = gen.at("cells");
        if (jcells.size() == 1) {
            cells.assign(grid.num_cells(), matrix_from_json(jcells[0], space.dim()));
        } else {
            if (jcells.size() != grid.num_cells())
                throw ConfigParse("generator needs one matrix per grid cell");
            for (const json& c : jcells)
                cells.push_back(matrix_from_json(c, space.dim()));
        }
        FactorScenario scenario(grid);
        if (j.contains("scenario")) {
            std::vector<Vector> values;
            for (const json& row : j.at("scenario").at("values"))
                values.push_back(vector_from_json(row));
            scenario = FactorScenario(grid, std::move(values));
        }
        CmcModel model(std::move(space),
                       GeneratorPath(std::move(scenario), std::move(cells)),
                       InitialLaw(vector_from_json(j.at("initial_law"))));
        return ParsedModel{std::move(model), std::nullopt};
    }

    if (kind == "common_jump") {
        CopulaCandidate cand = build_common_jump(grid, rate_from_json(gen, grid, "a"),
                                                 rate_from_json(gen, grid, "b"),
                                                 rate_from_json(gen, grid, "c"));
        return ParsedModel{cand.model, std::move(cand)};
    }
    if (kind == "weak_only") {
        CopulaCandidate cand = build_weak_only(grid, rate_from_json(gen, grid, "a"),
                                               rate_from_json(gen, grid, "b"),
                                               rate_from_json(gen, grid, "c"));
        return ParsedModel{cand.model, std::move(cand)};
    }
    if (kind == "conditional_independence" || kind == "kron_sum") {
        CopulaCandidate cand = build_conditional_independence(spec_from_json(gen, grid));
        return ParsedModel{cand.model, std::move(cand)};
    }
    if (kind == "perfect_dependence") {
        const int copies = gen.at("copies").get<int>();
        ComponentTarget base = component_from_json(gen.at("component"), grid);
        MarginalSpec spec{grid, std::vector<ComponentTarget>(copies, base)};
        CopulaCandidate cand = build_perfect_dependence(spec);
        return ParsedModel{cand.model, std::move(cand)};
    }
    throw ConfigParse("unknown generator kind " + kind);
}

CmcModel model_from_json(const json& j) {
    return parse_model_config(j).model;
}

json candidate_to_json(const CopulaCandidate& candidate) {
    json j = model_to_json(candidate.model);
    j["kind"] = to_string(candidate.kind);
    j["initial_law_provenance"] =
        candidate.initial_provenance == InitialLawProvenance::ProductLaw ? "product"
                                                                         : "supplied";
    json targets = json::array();
    for (const ComponentTarget& c : candidate.targets.components) {
        json cells = json::array();
        for (const Matrix& m : c.cells)
            cells.push_back(matrix_to_json(m));
        json init = json::array();
        for (Eigen::Index i = 0; i < c.initial.size(); ++i)
            init.push_back(c.initial[i]);
        targets.push_back({{"cells", cells}, {"initial", init}});
    }
    j["targets"] = targets;
    return j;
}

PoolModel pool_from_json(const json& j) {
    if (j.value("schema", "") != kPoolSchema)
        throw ConfigParse("expected schema " + std::string(kPoolSchema));
    ParsedModel parsed = parse_model_config(j.at("model"));
    if (!parsed.candidate)
        throw ConfigParse("pool model needs a named copula constructor");
    PoolModel pool{std::move(*parsed.candidate), j.value("discount_rate", 0.0),
                   j.value("benefit_rate", 1.0), j.value("evaluation_time", 0.0)};
    pool.validate();
    return pool;
}

json report_to_json(const ConsistencyReport& report) {
    json j;
    j["component"] = report.component;
    j["algebraic_strong"] = to_string(report.algebraic_strong);
    j["strong"] = to_string(report.strong);
    j["weak_necessary"] = to_string(report.weak_necessary);
    json witnesses = json::array();
    for (const Witness& w : report.witnesses)
        witnesses.push_back({{"cell", w.cell},
                             {"state", w.x},
                             {"reference_state", w.x_bar},
                             {"component_target", w.y_k},
                             {"lhs", w.lhs},
                             {"rhs", w.rhs}});
    j["witnesses"] = witnesses;
    if (report.marginal) {
        json cells = json::array();
        for (const Matrix& m : report.marginal->cells)
            cells.push_back(matrix_to_json(m));
        j["marginal"] = {{"component", report.marginal->component}, {"cells", cells}};
    }
    return j;
}

json precopula_to_json(const PrecopulaReport& report) {
    json j;
    j["strong"] = {{"aggregation", to_string(report.strong_aggregation)},
                   {"canonical", to_string(report.strong_canonical)},
                   {"initial_invariance", to_string(report.strong_initial_invariance)},
                   {"initial_margins", to_string(report.strong_initial_margins)},
                   {"pass", report.strong_pass()}};
    j["weak"] = {{"canonical", to_string(report.weak_canonical)},
                 {"initial_invariance", to_string(report.weak_initial_invariance)},
                 {"initial_margins", to_string(report.weak_initial_margins)},
                 {"marginal_match", to_string(report.weak_marginal_match)},
                 {"pass", report.weak_pass()}};
    return j;
}

json quote_to_json(const PremiumQuote& quote, const PoolModel& pool) {
    const ProductStateSpace& space = pool.candidate.model.space;
    auto estimate = [](const PremiumEstimate& e) {
        json j;
        j["defined"] = e.defined;
        if (e.defined) {
            j["value"] = e.value;
            j["std_error"] = e.std_error;
            j["samples"] = e.samples;
        }
        return j;
    };
    json j;
    j["n_paths"] = quote.n_paths;
    j["seed"] = quote.seed;
    j["evaluation_time"] = pool.eval_time;
    j["discount_rate"] = pool.discount_rate;
    j["benefit_rate"] = pool.benefit_rate;
    json individuals = json::array();
    for (std::size_t k = 0; k < quote.individual.size(); ++k) {
        json jk;
        jk["component"] = k;
        jk["own_state"] = {{"employed", estimate(quote.individual[k][0])},
                           {"unemployed", estimate(quote.individual[k][1])}};
        json by_pool = json::array();
        for (int x = 0; x < space.dim(); ++x) {
            json entry;
            json state = json::array();
            for (int c : space.multi_index(x))
                state.push_back(c);
            entry["pool_state"] = state;
            entry["estimate"] = estimate(quote.pool[k][x]);
            by_pool.push_back(entry);
        }
        jk["pool_state"] = by_pool;
        individuals.push_back(jk);
    }
    j["individuals"] = individuals;
    return j;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigParse("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigParse(path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    out << text;
}

void export_transition_csv(const TransitionField& field, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw Error("cannot open " + path);
    std::fprintf(f, "s,t,entries_row_major\n");
    const std::size_t m = field.grid().size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            const Matrix P = field.between(i, j);
            std::fprintf(f, "%.17g,%.17g", field.grid().point(i), field.grid().point(j));
            for (Eigen::Index r = 0; r < P.rows(); ++r)
                for (Eigen::Index c = 0; c < P.cols(); ++c)
                    std::fprintf(f, ",%.17g", P(r, c));
            std::fprintf(f, "\n");
        }
    std::fclose(f);
}

void export_distribution_csv(const StateDistributionPath& path_values,
                             const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw Error("cannot open " + path);
    std::fprintf(f, "t,probabilities\n");
    for (std::size_t i = 0; i < path_values.grid.size(); ++i) {
        std::fprintf(f, "%.17g", path_values.grid.point(i));
        const Vector& v = path_values.values[i];
        for (Eigen::Index x = 0; x < v.size(); ++x)
            std::fprintf(f, ",%.17g", v[x]);
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

}  // namespace cmc
