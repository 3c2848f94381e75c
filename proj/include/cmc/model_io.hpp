#pragma once

#include <string>

#include "cmc/consistency.hpp"
#include "cmc/copulae.hpp"
#include "cmc/kolmogorov.hpp"
#include "cmc/premium.hpp"

#include "json.hpp"

namespace cmc {

/// JSON model schema, versioned via the "schema" field ("cmc-model/1").
/// Matrices are serialized row-major; times are in years. The generator is
/// either explicit per-cell matrices
///   {"kind": "cells", "cells": [[...d*d...], ...]}
/// or a named constructor:
///   {"kind": "kron_sum" | "conditional_independence",
///    "components": [{"cells": [...], "initial": [...]}, ...]}
///   {"kind": "common_jump" | "weak_only", "a": ..., "b": ..., "c": ...}
///   {"kind": "perfect_dependence", "copies": N,
///    "component": {"cells": [...], "initial": [...]}}
/// where rate parameters are a scalar or one value per cell.
inline constexpr const char* kModelSchema = "cmc-model/1";
inline constexpr const char* kPoolSchema = "cmc-pool/1";

nlohmann::json model_to_json(const CmcModel& model);
CmcModel model_from_json(const nlohmann::json& j);

/// Parses either a bare model or a named copula constructor. A bare model
/// (or explicit cells) yields kind "custom" with targets left empty.
struct ParsedModel {
    CmcModel model;
    std::optional<CopulaCandidate> candidate;  // present for named constructors
};
ParsedModel parse_model_config(const nlohmann::json& j);

nlohmann::json candidate_to_json(const CopulaCandidate& candidate);

PoolModel pool_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const ConsistencyReport& report);
nlohmann::json precopula_to_json(const PrecopulaReport& report);
nlohmann::json quote_to_json(const PremiumQuote& quote, const PoolModel& pool);

nlohmann::json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// CSV with one line per grid pair:  s,t,p11,p12,...  (row-major entries).
void export_transition_csv(const TransitionField& field, const std::string& path);

/// CSV with one line per grid point:  t,pi1,pi2,...
void export_distribution_csv(const StateDistributionPath& path_values,
                             const std::string& path);

}  // namespace cmc
