#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "layered_hill/experiment.hpp"

namespace layered_hill {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::set<std::string>& known, const std::string& where) {
  for (const auto& item : object.items())
    if (!known.count(item.key())) throw Error(ErrorCode::ConfigInvalid, "unknown key '" + item.key() + "' in " + where);
}

Constraint parse_constraint(const json& node, std::optional<int> k) {
  reject_unknown(node, {"kind", "arity", "radius"}, "constraint");
  const auto kind = constraint_kind_from_string(node.at("kind").get<std::string>());
  int arity = node.contains("arity") ? node.at("arity").get<int>() : k.value_or(0);
  if (kind == ConstraintKind::AlwaysOne && !node.contains("arity") && !k) arity = 1;
  if (kind == ConstraintKind::PairDistance && !node.contains("arity") && !k) arity = 2;
  if (k && arity != *k) throw Error(ErrorCode::ConfigInvalid, "estimator k differs from constraint arity");
  const double radius = node.contains("radius") ? node.at("radius").get<double>() : 0.0;
  if (kind != ConstraintKind::AlwaysOne && !node.contains("radius"))
    throw Error(ErrorCode::ConfigInvalid, "constraint needs a radius");
  try {
    return Constraint(kind, arity, radius);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
}

ExperimentConfig from_json(const json& root) {
  if (!root.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  reject_unknown(root,
                 {"model", "n", "beta", "m", "estimators", "deltas", "replications", "gamma", "master_seed",
                  "mix_weights", "true_alpha", "cut", "regime_tol", "workers", "outputs"},
                 "config");
  ExperimentConfig config;

  const json& model = root.at("model");
  reject_unknown(model, {"family", "alpha", "d", "poissonize"}, "model");
  config.model.family = radial_family_from_string(model.at("family").get<std::string>());
  config.model.alpha = model.at("alpha").get<double>();
  config.model.d = model.at("d").get<int>();
  config.poissonize = model.value("poissonize", false);

  config.n = root.at("n").get<std::uint64_t>();
  if (root.contains("beta")) config.beta = root.at("beta").get<double>();
  if (root.contains("m")) config.m = root.at("m").get<std::uint64_t>();

  config.estimators.clear();
  for (const json& node : root.at("estimators")) {
    reject_unknown(node, {"name", "k", "constraint"}, "estimator");
    std::optional<int> k;
    if (node.contains("k")) k = node.at("k").get<int>();
    EstimatorSpec spec;
    spec.constraint = parse_constraint(node.at("constraint"), k);
    spec.name = node.value("name", "L" + std::to_string(spec.constraint.arity()));
    config.estimators.push_back(std::move(spec));
  }

  if (root.contains("deltas")) config.deltas = root.at("deltas").get<std::vector<double>>();
  config.replications = root.value("replications", config.replications);
  config.gamma = root.value("gamma", config.gamma);
  config.master_seed = root.value("master_seed", config.master_seed);
  if (root.contains("mix_weights")) {
    const auto w = root.at("mix_weights").get<std::vector<double>>();
    if (w.size() != 2) throw Error(ErrorCode::ConfigInvalid, "mix_weights needs exactly two entries");
    config.mix_weights = std::make_pair(w[0], w[1]);
  }
  if (root.contains("true_alpha") && !root.at("true_alpha").is_null())
    config.true_alpha = root.at("true_alpha").get<double>();
  if (root.contains("cut")) config.cut = hill_cut_from_string(root.at("cut").get<std::string>());
  config.regime_tol = root.value("regime_tol", config.regime_tol);
  config.workers = root.value("workers", config.workers);

  if (root.contains("outputs")) {
    const json& outputs = root.at("outputs");
    reject_unknown(outputs, {"report", "coverage", "samples"}, "outputs");
    if (outputs.contains("report")) config.outputs.report = outputs.at("report").get<std::string>();
    if (outputs.contains("coverage")) config.outputs.coverage = outputs.at("coverage").get<std::string>();
    if (outputs.contains("samples")) config.outputs.samples = outputs.at("samples").get<std::string>();
  }
  config.validate();
  return config;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    model.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  if (n < 1) throw Error(ErrorCode::ConfigInvalid, "n must be positive");
  if (!beta && !m) throw Error(ErrorCode::ConfigInvalid, "either beta or m is required");
  if (beta && !m && !(*beta > 0.0 && *beta < 1.0)) throw Error(ErrorCode::ConfigInvalid, "beta must lie in (0, 1)");
  if (m && *m < 1) throw Error(ErrorCode::ConfigInvalid, "m must be positive");
  if (estimators.empty()) throw Error(ErrorCode::ConfigInvalid, "at least one estimator is required");
  std::set<std::string> names;
  for (const auto& e : estimators) {
    if (!names.insert(e.name).second) throw Error(ErrorCode::ConfigInvalid, "duplicate estimator name " + e.name);
    if (e.name == "Mix") throw Error(ErrorCode::ConfigInvalid, "'Mix' is reserved for the mixture row");
  }
  if (deltas.empty()) throw Error(ErrorCode::ConfigInvalid, "at least one delta is required");
  for (double delta : deltas)
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw Error(ErrorCode::ConfigInvalid, "deltas must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::ConfigInvalid, "gamma must lie in [0, 1)");
  if (mix_weights) {
    if (estimators.size() < 2) throw Error(ErrorCode::ConfigInvalid, "mix_weights needs two estimators");
    if (std::abs(mix_weights->first + mix_weights->second - 1.0) > 1e-9)
      throw Error(ErrorCode::ConfigInvalid, "mix_weights must sum to 1");
  }
  if (!(regime_tol >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "regime_tol must be non-negative");
  try {
    for (const auto& e : estimators) {
      (void)required_values(cutoff(), e.k(), cut);
      if (e.constraint.kind() != ConstraintKind::AlwaysOne && e.constraint.radius() <= 0.0)
        throw Error(ErrorCode::ConfigInvalid, "estimator " + e.name + " needs a positive radius");
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
}

std::uint64_t ExperimentConfig::cutoff() const {
  if (m) return *m;
  const double value = std::pow(static_cast<double>(n), beta.value_or(0.0));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(value)));
}

double ExperimentConfig::effective_beta() const {
  if (!m && beta) return *beta;
  if (n <= 1) return 0.0;
  return std::log(static_cast<double>(cutoff())) / std::log(static_cast<double>(n));
}

ExperimentConfig parse_config(std::string_view json_text) {
  try {
    return from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace layered_hill
