#include "egap/problem_io.hpp"

#include <fstream>

namespace egap {

namespace {

using nlohmann::json;
using VE = ValidationError;

Vector to_vector(const json& j, std::optional<std::size_t> component, const char* field) {
  if (!j.is_array()) throw VE(VE::Kind::malformed_document, component, std::string(field) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw VE(VE::Kind::malformed_document, component, std::string(field) + " must hold numbers");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, std::size_t component, const char* field) {
  if (!j.is_array() || j.empty()) throw VE(VE::Kind::malformed_document, component, std::string(field) + " must be a nonempty array of rows");
  const std::size_t cols = j[0].size();
  Matrix a(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != cols) throw VE(VE::Kind::dimension_mismatch, component, std::string(field) + " rows differ in length");
    a.row(static_cast<Eigen::Index>(r)) = to_vector(j[r], component, field).transpose();
  }
  return a;
}

json from_vector(const Vector& v) {
  json j = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) j.push_back(v[k]);
  return j;
}

json from_matrix(const Matrix& a) {
  json j = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) j.push_back(from_vector(a.row(r).transpose()));
  return j;
}

ObjectiveOracle parse_objective(const json& j, std::size_t i) {
  if (!j.is_object() || !j.contains("kind")) throw VE(VE::Kind::malformed_document, i, "objective needs a kind");
  const auto kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  if (kind == "weighted_abs") return WeightedAbs{to_vector(params.at("w"), i, "w"), to_vector(params.at("a"), i, "a")};
  if (kind == "linear_minus_log")
    return LinearMinusLog{to_vector(params.at("a"), i, "a"), params.at("w").get<double>(), to_vector(params.at("b"), i, "b")};
  if (kind == "convex_quadratic") return ConvexQuadratic{to_matrix(params.at("Q"), i, "Q"), to_vector(params.at("q"), i, "q")};
  if (kind == "zero") return ZeroObjective{};
  throw VE(VE::Kind::invalid_objective, i, "unknown objective kind '" + kind + "'");
}

json objective_json(const ObjectiveOracle& objective) {
  if (auto* o = std::get_if<WeightedAbs>(&objective))
    return {{"kind", "weighted_abs"}, {"params", {{"w", from_vector(o->weights)}, {"a", from_vector(o->anchors)}}}};
  if (auto* o = std::get_if<LinearMinusLog>(&objective))
    return {{"kind", "linear_minus_log"},
            {"params", {{"a", from_vector(o->linear)}, {"w", o->weight}, {"b", from_vector(o->log_coeffs)}}}};
  if (auto* o = std::get_if<ConvexQuadratic>(&objective))
    return {{"kind", "convex_quadratic"}, {"params", {{"Q", from_matrix(o->hessian)}, {"q", from_vector(o->linear)}}}};
  return {{"kind", "zero"}, {"params", json::object()}};
}

}  // namespace

SeparableProblem build_problem(const json& document) {
  try {
    if (!document.is_object() || !document.contains("components") || !document.contains("b"))
      throw VE(VE::Kind::malformed_document, std::nullopt, "problem document needs 'components' and 'b'");
    const Vector b = to_vector(document.at("b"), std::nullopt, "b");
    std::vector<ComponentSpec> components;
    const auto& list = document.at("components");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const json& cj = list[i];
      ComponentSpec c;
      c.box.lower = to_vector(cj.at("box").at("lower"), i, "box.lower");
      c.box.upper = to_vector(cj.at("box").at("upper"), i, "box.upper");
      c.objective = parse_objective(cj.at("objective"), i);

      const json& block = cj.value("block", json("identity"));
      if (block.is_string()) {
        if (block.get<std::string>() != "identity") throw VE(VE::Kind::malformed_document, i, "unknown block tag");
        // The identity tag requires m = n_i; validation reports it as a row mismatch otherwise.
        c.block = CouplingBlock::identity(c.box.size());
      } else {
        c.block = CouplingBlock::dense(to_matrix(block.at("dense"), i, "block.dense"));
      }

      const json prox = cj.value("prox", json::object());
      c.prox.rho = prox.value("rho", 1.0);
      if (prox.contains("center")) c.prox.center = to_vector(prox.at("center"), i, "prox.center");
      c.sigma_phi = cj.value("sigma_phi", 0.0);
      if (cj.contains("gradient_lipschitz") && !cj.at("gradient_lipschitz").is_null())
        c.gradient_lipschitz = cj.at("gradient_lipschitz").get<double>();
      components.push_back(std::move(c));
    }
    const std::string coupling = document.value("coupling", std::string("eq"));
    if (coupling != "eq" && coupling != "le") throw VE(VE::Kind::malformed_document, std::nullopt, "coupling must be 'eq' or 'le'");
    return SeparableProblem(std::move(components), b, coupling == "eq" ? CouplingKind::equality : CouplingKind::inequality);
  } catch (const json::exception& e) {
    throw VE(VE::Kind::malformed_document, std::nullopt, std::string("problem document: ") + e.what());
  }
}

SeparableProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw VE(VE::Kind::malformed_document, std::nullopt, "cannot parse '" + path + "': " + e.what());
  }
  return build_problem(doc);
}

json to_json(const SeparableProblem& problem) {
  json components = json::array();
  for (const auto& c : problem.components()) {
    json cj;
    cj["objective"] = objective_json(c.objective);
    cj["box"] = {{"lower", from_vector(c.box.lower)}, {"upper", from_vector(c.box.upper)}};
    cj["block"] = c.block.is_identity() ? json("identity") : json{{"dense", from_matrix(c.block.matrix())}};
    cj["prox"] = {{"rho", c.prox.rho}, {"center", from_vector(c.prox.center)}};
    cj["sigma_phi"] = c.sigma_phi;
    if (c.gradient_lipschitz) cj["gradient_lipschitz"] = *c.gradient_lipschitz;
    components.push_back(std::move(cj));
  }
  return {{"components", components},
          {"b", from_vector(problem.rhs())},
          {"coupling", problem.coupling_kind() == CouplingKind::equality ? "eq" : "le"}};
}

}  // namespace egap
