#include <json.hpp>

#include "layered_hill/estimator.hpp"

namespace layered_hill {

namespace {

template <typename T>
nlohmann::json optional_value(const std::optional<T>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

}  // namespace

std::string to_json(const EstimateReport& report) {
  nlohmann::ordered_json out;
  out["k"] = report.k;
  out["d"] = report.d;
  out["m"] = report.m;
  out["H"] = report.h;
  out["alpha_hat"] = report.alpha_hat;
  out["regime"] = std::string(to_string(report.regime.tag));
  out["variance_A"] = optional_value(report.variance_a);
  out["tau"] = optional_value(report.tau);
  if (report.ci) {
    out["ci_lower"] = report.ci->lower;
    out["ci_upper"] = report.ci->upper;
    out["gamma"] = report.ci->gamma;
  } else {
    out["ci_lower"] = nullptr;
    out["ci_upper"] = nullptr;
    out["gamma"] = nullptr;
  }
  return out.dump(2);
}

std::string to_json(const GeometricConstants& gc) {
  nlohmann::ordered_json out;
  out["k"] = gc.k;
  out["d"] = gc.d;
  out["C_k"] = gc.ck;
  nlohmann::ordered_json dkl = nlohmann::ordered_json::object();
  for (const auto& [l, value] : gc.dkl) dkl[std::to_string(l)] = value;
  out["D"] = dkl;
  if (gc.monte_carlo) {
    out["method"] = "monte_carlo";
    out["samples"] = gc.monte_carlo->samples;
    out["standard_error"] = gc.monte_carlo->standard_error;
    nlohmann::ordered_json se = nlohmann::ordered_json::object();
    for (const auto& [l, value] : gc.monte_carlo->dkl_standard_error) se[std::to_string(l)] = value;
    out["D_standard_error"] = se;
  } else {
    out["method"] = "closed_form";
  }
  return out.dump(2);
}

}  // namespace layered_hill
