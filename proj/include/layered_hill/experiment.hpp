#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "layered_hill/constraint.hpp"
#include "layered_hill/error.hpp"
#include "layered_hill/estimator.hpp"
#include "layered_hill/samplers.hpp"

namespace layered_hill {

struct EstimatorSpec {
  std::string name;
  Constraint constraint = Constraint::always_one();

  int k() const noexcept { return constraint.arity(); }
};

/// One simulation scenario. Field names mirror the snake_case keys of the
/// JSON config file.
struct ExperimentConfig {
  RadialModel model;
  bool poissonize = false;
  std::uint64_t n = 10'000;
  std::optional<double> beta;      ///< m = round(n^beta)
  std::optional<std::uint64_t> m;  ///< explicit cut-off, overrides beta
  std::vector<EstimatorSpec> estimators;
  std::vector<double> deltas{0.0};
  std::uint64_t replications = 500;
  double gamma = 0.95;
  std::uint64_t master_seed = 0;
  std::optional<std::pair<double, double>> mix_weights;
  /// On the model's own alpha scale; defaults to model.alpha.
  std::optional<double> true_alpha;
  HillCut cut = HillCut::Definition;
  double regime_tol = kDefaultRegimeTolerance;
  unsigned workers = 0;  ///< 0 = hardware concurrency

  struct Outputs {
    std::optional<std::string> report;
    std::optional<std::string> coverage;
    std::optional<std::string> samples;
  } outputs;

  void validate() const;
  std::uint64_t cutoff() const;
  /// beta as configured, or log m / log n when m is explicit.
  double effective_beta() const;
  double truth() const { return true_alpha.value_or(model.alpha); }
  /// Added to a model-scale alpha to get the density exponent (0 or d).
  double scale_offset() const { return model.density_exponent() - model.alpha; }
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Result of one estimator on one censored view of one replicate. Alphas
/// and interval ends are on the model's alpha scale.
struct EstimatorOutcome {
  bool ok = false;
  std::optional<ErrorCode> error;
  std::string message;
  double h = 0.0;
  double alpha = 0.0;
  std::optional<ConfidenceInterval> ci;
  std::optional<double> statistic;
};

struct ReplicateResult {
  std::uint64_t stream_id = 0;
  std::uint64_t cloud_size = 0;
  /// outcomes[delta index][estimator index]
  std::vector<std::vector<EstimatorOutcome>> outcomes;
};

struct CellSummary {
  std::string estimator;
  int k = 0;  ///< 0 for the mixture
  double delta = 0.0;
  std::uint64_t used = 0;
  std::uint64_t excluded = 0;
  double mean_alpha = 0.0;
  double rmse = 0.0;
  std::optional<double> coverage;
  std::uint64_t ci_count = 0;
};

struct SampleRow {
  std::string estimator;
  int k = 0;
  double delta = 0.0;
  std::uint64_t stream_id = 0;
  double statistic = 0.0;
};

struct ExperimentReport {
  std::vector<CellSummary> cells;
  std::vector<SampleRow> samples;
  std::vector<std::string> warnings;

  const CellSummary& cell(std::string_view estimator, double delta) const;
  /// Normalised statistics of one (estimator, delta) cell, in stream order.
  std::vector<double> statistics(std::string_view estimator, double delta) const;
};

/// Prepared scenario: validated config plus per-estimator constants.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const noexcept { return config_; }

  /// One cloud, censored at every delta (nested), every estimator applied.
  ReplicateResult run_replicate(std::uint64_t stream_id) const;
  std::vector<ReplicateResult> run_replicates() const;
  ExperimentReport run() const;

  static ExperimentReport aggregate(const ExperimentConfig& config, std::span<const ReplicateResult> replicates);

 private:
  ExperimentConfig config_;
  std::vector<GeometricConstants> constants_;
};

ReplicateResult run_replicate(const ExperimentConfig& config, std::uint64_t stream_id);
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Per (estimator, delta) CI coverage, with a warning when the configured
/// cut-off is not in the vanishing regime.
ExperimentReport coverage_experiment(const ExperimentConfig& config);

void write_report_csv(std::ostream& out, const ExperimentReport& report);
void write_coverage_csv(std::ostream& out, const ExperimentReport& report);
void write_samples_csv(std::ostream& out, const ExperimentReport& report);
void write_csv_file(const std::filesystem::path& path, const ExperimentReport& report,
                    void (*writer)(std::ostream&, const ExperimentReport&));

/// Runs the experiment and writes samples.csv to `path`.
ExperimentReport export_normalized_samples(const ExperimentConfig& config, const std::filesystem::path& path);

/// Two-sided Kolmogorov-Smirnov distance to the standard normal CDF.
double ks_statistic(std::span<const double> samples);

}  // namespace layered_hill
