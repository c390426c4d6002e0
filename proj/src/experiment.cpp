#include "layered_hill/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "layered_hill/tuple_order_stats.hpp"

namespace layered_hill {

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.validate();
  constants_.reserve(config_.estimators.size());
  for (const auto& e : config_.estimators) constants_.push_back(geometric_constants(e.constraint, config_.model.d));
}

ReplicateResult Experiment::run_replicate(std::uint64_t stream_id) const {
  const ExperimentConfig& cfg = config_;
  SeededRng rng(cfg.master_seed, stream_id);
  const PointCloudd base = sample_cloud(cfg.model, cfg.n, rng, cfg.poissonize);

  const std::uint64_t m = cfg.cutoff();
  const int d = cfg.model.d;
  const double offset = cfg.scale_offset();
  const double true_density_alpha = cfg.truth() + offset;
  const double beta = cfg.effective_beta();

  ReplicateResult result;
  result.stream_id = stream_id;
  result.cloud_size = static_cast<std::uint64_t>(base.size());
  result.outcomes.resize(cfg.deltas.size());

  for (std::size_t di = 0; di < cfg.deltas.size(); ++di) {
    auto& row = result.outcomes[di];
    row.resize(cfg.estimators.size());
    const std::uint64_t removed = missing_count(cfg.deltas[di], m);
    if (removed > result.cloud_size) {
      for (auto& outcome : row) {
        outcome.error = ErrorCode::InsufficientExtremes;
        outcome.message = "censoring removes the whole cloud";
      }
      continue;
    }
    const PointCloudd censored = remove_top_extremes(base, removed);

    for (std::size_t ei = 0; ei < cfg.estimators.size(); ++ei) {
      const EstimatorSpec& spec = cfg.estimators[ei];
      const int k = spec.k();
      EstimatorOutcome& outcome = row[ei];
      try {
        if (k > censored.size()) throw Error(ErrorCode::InsufficientExtremes, "fewer points than the arity");
        const OrderStatStream stream = top_tuple_values(censored, spec.constraint, required_values(m, k, cfg.cut));
        outcome.h = layered_hill(stream, m, cfg.cut);
        const double density_alpha = alpha_hat(outcome.h, k, d);
        outcome.alpha = density_alpha - offset;
        outcome.ok = true;

        try {
          ConfidenceInterval ci = confidence_interval(outcome.h, k, d, m, cfg.gamma);
          ci.lower -= offset;
          ci.upper -= offset;
          outcome.ci = ci;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DegenerateInterval) throw;
        }
        try {
          const Regime regime = select_regime(beta, k, d, density_alpha, cfg.regime_tol);
          outcome.statistic = normalized_statistic(outcome.h, k, d, m, true_density_alpha, density_alpha, regime,
                                                   constants_[ei]);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::UnsupportedRegime && e.code() != ErrorCode::MissingXi &&
              e.code() != ErrorCode::ParameterOutOfRange)
            throw;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientExtremes && e.code() != ErrorCode::NonPositiveH) throw;
        outcome = EstimatorOutcome{};
        outcome.error = e.code();
        char tag[96];
        std::snprintf(tag, sizeof tag, "[%s, delta=%g, stream=%llu] ", spec.name.c_str(), cfg.deltas[di],
                      static_cast<unsigned long long>(stream_id));
        outcome.message = tag + std::string(e.what());
      }
    }
  }
  return result;
}

std::vector<ReplicateResult> Experiment::run_replicates() const {
  const std::uint64_t total = config_.replications;
  std::vector<ReplicateResult> results(total);
  unsigned workers = config_.workers ? config_.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(total, 1)));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::uint64_t id = next.fetch_add(1);
      if (id >= total) return;
      try {
        results[id] = run_replicate(id);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

namespace {

struct Accumulator {
  std::uint64_t used = 0;
  std::uint64_t excluded = 0;
  double sum = 0.0;
  double sum_sq_err = 0.0;
  std::uint64_t ci_count = 0;
  std::uint64_t covered = 0;

  void add(double alpha, double truth) {
    ++used;
    sum += alpha;
    sum_sq_err += (alpha - truth) * (alpha - truth);
  }

  CellSummary finish(std::string name, int k, double delta) const {
    CellSummary cell;
    cell.estimator = std::move(name);
    cell.k = k;
    cell.delta = delta;
    cell.used = used;
    cell.excluded = excluded;
    const double nan = std::nan("");
    cell.mean_alpha = used ? sum / static_cast<double>(used) : nan;
    cell.rmse = used ? std::sqrt(sum_sq_err / static_cast<double>(used)) : nan;
    cell.ci_count = ci_count;
    if (ci_count) cell.coverage = static_cast<double>(covered) / static_cast<double>(ci_count);
    return cell;
  }
};

}  // namespace

ExperimentReport Experiment::aggregate(const ExperimentConfig& config, std::span<const ReplicateResult> replicates) {
  ExperimentReport report;
  const double truth = config.truth();
  for (std::size_t di = 0; di < config.deltas.size(); ++di) {
    const double delta = config.deltas[di];
    for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
      const EstimatorSpec& spec = config.estimators[ei];
      Accumulator acc;
      for (const ReplicateResult& rep : replicates) {
        const EstimatorOutcome& o = rep.outcomes[di][ei];
        if (!o.ok) {
          ++acc.excluded;
          continue;
        }
        acc.add(o.alpha, truth);
        if (o.ci) {
          ++acc.ci_count;
          if (o.ci->lower <= truth && truth <= o.ci->upper) ++acc.covered;
        }
        if (o.statistic) report.samples.push_back({spec.name, spec.k(), delta, rep.stream_id, *o.statistic});
      }
      report.cells.push_back(acc.finish(spec.name, spec.k(), delta));
    }
    if (config.mix_weights) {
      const auto [w1, w2] = *config.mix_weights;
      Accumulator acc;
      for (const ReplicateResult& rep : replicates) {
        const EstimatorOutcome& a = rep.outcomes[di][0];
        const EstimatorOutcome& b = rep.outcomes[di][1];
        if (!a.ok || !b.ok) {
          ++acc.excluded;
          continue;
        }
        acc.add(w1 * a.alpha + w2 * b.alpha, truth);
      }
      report.cells.push_back(acc.finish("Mix", 0, delta));
    }
  }
  return report;
}

ExperimentReport Experiment::run() const {
  const auto replicates = run_replicates();
  return aggregate(config_, replicates);
}

const CellSummary& ExperimentReport::cell(std::string_view estimator, double delta) const {
  for (const auto& c : cells)
    if (c.estimator == estimator && c.delta == delta) return c;
  throw Error(ErrorCode::ParameterOutOfRange, "no cell for " + std::string(estimator));
}

std::vector<double> ExperimentReport::statistics(std::string_view estimator, double delta) const {
  std::vector<double> out;
  for (const auto& s : samples)
    if (s.estimator == estimator && s.delta == delta) out.push_back(s.statistic);
  return out;
}

ReplicateResult run_replicate(const ExperimentConfig& config, std::uint64_t stream_id) {
  return Experiment(config).run_replicate(stream_id);
}

ExperimentReport run_experiment(const ExperimentConfig& config) { return Experiment(config).run(); }

ExperimentReport coverage_experiment(const ExperimentConfig& config) {
  ExperimentReport report = run_experiment(config);
  const double density_alpha = config.truth() + config.scale_offset();
  for (const auto& e : config.estimators) {
    const Regime regime =
        select_regime(config.effective_beta(), e.k(), config.model.d, density_alpha, config.regime_tol);
    if (regime.tag != RegimeTag::Vanishing) {
      report.warnings.push_back("estimator " + e.name + ": cut-off is in the " + std::string(to_string(regime.tag)) +
                                " regime; intervals assume the vanishing regime");
    }
  }
  return report;
}

namespace {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "estimator,k,delta,mean_alpha,rmse,excluded\n";
  for (const auto& c : report.cells) {
    out << c.estimator << ',' << c.k << ',' << format_number(c.delta) << ',' << format_number(c.mean_alpha) << ','
        << format_number(c.rmse) << ',' << c.excluded << '\n';
  }
}

void write_coverage_csv(std::ostream& out, const ExperimentReport& report) {
  out << "estimator,k,delta,coverage\n";
  for (const auto& c : report.cells) {
    if (c.estimator == "Mix") continue;
    out << c.estimator << ',' << c.k << ',' << format_number(c.delta) << ','
        << format_number(c.coverage.value_or(std::nan(""))) << '\n';
  }
}

void write_samples_csv(std::ostream& out, const ExperimentReport& report) {
  out << "estimator,k,delta,stream_id,statistic\n";
  for (const auto& s : report.samples) {
    out << s.estimator << ',' << s.k << ',' << format_number(s.delta) << ',' << s.stream_id << ','
        << format_number(s.statistic) << '\n';
  }
}

void write_csv_file(const std::filesystem::path& path, const ExperimentReport& report,
                    void (*writer)(std::ostream&, const ExperimentReport&)) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  writer(out, report);
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "failed writing " + path.string());
}

ExperimentReport export_normalized_samples(const ExperimentConfig& config, const std::filesystem::path& path) {
  ExperimentReport report = run_experiment(config);
  write_csv_file(path, report, write_samples_csv);
  return report;
}

double ks_statistic(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptySample, "KS statistic of an empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  double distance = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = normal_cdf(sorted[i]);
    distance = std::max({distance, static_cast<double>(i + 1) / count - cdf, cdf - static_cast<double>(i) / count});
  }
  return distance;
}

}  // namespace layered_hill
