// Command-line front end: point estimates, geometric constants and the
// Monte Carlo experiments (simulate / coverage / normality).

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "layered_hill/estimator.hpp"
#include "layered_hill/experiment.hpp"
#include "layered_hill/point_csv.hpp"

namespace lh = layered_hill;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInsufficient = 3;

int exit_code_for(const lh::Error& e, bool estimate_mode) {
  switch (e.code()) {
    case lh::ErrorCode::ConfigInvalid:
    case lh::ErrorCode::InvalidConstraint:
    case lh::ErrorCode::UnsupportedConstraint:
    case lh::ErrorCode::ParameterOutOfRange:
    case lh::ErrorCode::ProbabilityOutOfRange:
      return kExitConfig;
    case lh::ErrorCode::InsufficientExtremes:
      return estimate_mode ? kExitInsufficient : kExitFailure;
    default:
      return kExitFailure;
  }
}

lh::Constraint make_constraint(const std::string& kind, int k, std::optional<double> radius) {
  const auto parsed = lh::constraint_kind_from_string(kind);
  if (parsed != lh::ConstraintKind::AlwaysOne && !radius)
    throw lh::Error(lh::ErrorCode::ConfigInvalid, "--radius is required for " + kind);
  return lh::Constraint(parsed, k, radius.value_or(0.0));
}

void print_summary(const lh::ExperimentReport& report, const lh::ExperimentConfig& config) {
  for (const auto& e : config.estimators) {
    for (double delta : config.deltas) {
      const auto stats = report.statistics(e.name, delta);
      if (stats.empty()) continue;
      double mean = 0.0;
      for (double s : stats) mean += s;
      mean /= static_cast<double>(stats.size());
      double var = 0.0;
      for (double s : stats) var += (s - mean) * (s - mean);
      const double sd = stats.size() > 1 ? std::sqrt(var / static_cast<double>(stats.size() - 1)) : 0.0;
      std::fprintf(stderr, "%s delta=%g: n=%zu mean=%.4f sd=%.4f ks=%.4f\n", e.name.c_str(), delta, stats.size(),
                   mean, sd, lh::ks_statistic(stats));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered Hill estimators for heavy-tail exponents"};
  app.require_subcommand(1);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate the tail exponent of a point cloud");
  std::string input;
  int dim = 0;
  int k = 1;
  std::uint64_t m = 0;
  std::string kind = "always_one";
  std::optional<double> radius;
  std::optional<double> gamma;
  std::optional<double> beta;
  std::optional<double> xi;
  std::string cut = "definition";
  estimate->add_option("--input", input, "Point CSV file")->required();
  estimate->add_option("--dim", dim, "Dimension d")->required();
  estimate->add_option("--k", k, "Tuple arity")->required();
  estimate->add_option("--m", m, "Cut-off m (uses the top m^k tuples)")->required();
  estimate->add_option("--constraint", kind, "always_one | pair_distance | diameter | connectivity");
  estimate->add_option("--radius", radius, "Connectivity radius t");
  estimate->add_option("--gamma", gamma, "Confidence level for the interval");
  estimate->add_option("--beta", beta, "Override beta = log m / log n for regime selection");
  estimate->add_option("--xi", xi, "Limit constant for the constant regime");
  estimate->add_option("--cut", cut, "definition | traditional");

  // constants
  auto* constants = app.add_subcommand("constants", "Print C_k and D_{k,l}");
  std::optional<std::uint64_t> mc_samples;
  std::uint64_t seed = 0x5eed;
  constants->add_option("--dim", dim, "Dimension d")->required();
  constants->add_option("--k", k, "Tuple arity")->required();
  constants->add_option("--constraint", kind, "Constraint kind");
  constants->add_option("--radius", radius, "Connectivity radius t");
  constants->add_option("--mc-samples", mc_samples, "Force Monte Carlo integration with N samples");
  constants->add_option("--seed", seed, "Monte Carlo seed");

  // experiments
  std::string config_path;
  std::string out_path;
  std::optional<unsigned> workers;
  auto add_experiment = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", out_path, "Output CSV");
    sub->add_option("--workers", workers, "Worker threads (0 = all cores)");
    return sub;
  };
  auto* simulate = add_experiment("simulate", "Mean and RMSE of the estimates per (estimator, delta)");
  auto* coverage = add_experiment("coverage", "Confidence-interval coverage per (estimator, delta)");
  auto* normality = add_experiment("normality", "Export normalised statistics per replicate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  const bool estimate_mode = estimate->parsed();
  try {
    if (estimate_mode) {
      const lh::Constraint c = make_constraint(kind, k, radius);
      const lh::PointCloudd cloud = lh::read_point_csv(input, dim);
      lh::EstimateOptions options;
      options.cut = lh::hill_cut_from_string(cut);
      options.gamma = gamma;
      options.beta = beta;
      options.xi = xi;
      std::cout << lh::to_json(lh::estimate(cloud, c, m, options)) << '\n';
      return 0;
    }
    if (constants->parsed()) {
      const lh::Constraint c = make_constraint(kind, k, radius);
      std::cout << lh::to_json(lh::geometric_constants(c, dim, mc_samples, seed)) << '\n';
      return 0;
    }

    lh::ExperimentConfig config = lh::load_config(config_path);
    if (workers) config.workers = *workers;
    using Writer = void (*)(std::ostream&, const lh::ExperimentReport&);
    Writer writer = lh::write_report_csv;
    std::optional<std::string> destination = config.outputs.report;
    lh::ExperimentReport report;
    if (simulate->parsed()) {
      report = lh::run_experiment(config);
    } else if (coverage->parsed()) {
      report = lh::coverage_experiment(config);
      writer = lh::write_coverage_csv;
      destination = config.outputs.coverage;
    } else if (normality->parsed()) {
      report = lh::run_experiment(config);
      writer = lh::write_samples_csv;
      destination = config.outputs.samples;
      print_summary(report, config);
    }
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    if (!out_path.empty()) destination = out_path;
    if (destination) {
      lh::write_csv_file(*destination, report, writer);
    } else {
      writer(std::cout, report);
    }
    return 0;
  } catch (const lh::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e, estimate_mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
