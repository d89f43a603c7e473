#pragma once

#include <json.hpp>
#include <string>

#include "egap/problem.hpp"

namespace egap {

/// Builds a validated problem from the JSON problem document:
///
///   {"components": [{"objective": {"kind": ..., "params": {...}},
///                    "box": {"lower": [...], "upper": [...]},
///                    "block": "identity" | {"dense": [[...], ...]},
///                    "prox": {"rho": r, "center": [...]?},
///                    "sigma_phi": s, "gradient_lipschitz": L?}, ...],
///    "b": [...], "coupling": "eq" | "le"}
///
/// Objective kinds and params:
///   weighted_abs     {"w": [...], "a": [...]}
///   linear_minus_log {"a": [...], "w": r, "b": [...]}
///   convex_quadratic {"Q": [[...]], "q": [...]}
///   zero             {}
SeparableProblem build_problem(const nlohmann::json& document);
SeparableProblem load_problem(const std::string& path);

nlohmann::json to_json(const SeparableProblem& problem);

}  // namespace egap
