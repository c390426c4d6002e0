#include <Eigen/Core>

#include <cmath>
#include <random>
#include <vector>

#include "layered_hill/estimator.hpp"

namespace layered_hill {

double unit_sphere_area(int d) { return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d); }

double unit_ball_volume(int d) { return std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

double GeometricConstants::D(int l) const {
  auto it = dkl.find(l);
  if (it == dkl.end()) throw Error(ErrorCode::ParameterOutOfRange, "D_{k,l} requested outside 1 <= l <= k");
  return it->second;
}

namespace {

constexpr std::uint64_t kDefaultMcSamples = 1'000'000;

struct Integral {
  double value;
  double standard_error;
};

// Uniform points in the ball of radius `radius`, one per column.
class BallSampler {
 public:
  BallSampler(int d, double radius, std::uint64_t seed) : d_(d), radius_(radius), rng_(seed) {}

  void fill(Eigen::MatrixXd& out) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      auto col = out.col(j);
      double norm = 0.0;
      do {
        for (int c = 0; c < d_; ++c) col(c) = gauss_(rng_);
        norm = col.norm();
      } while (norm == 0.0);
      const double r = radius_ * std::pow(unit_(rng_), 1.0 / d_);
      col *= r / norm;
    }
  }

 private:
  int d_;
  double radius_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_;
  std::uniform_real_distribution<double> unit_;
};

// Integral over (R^d)^{2k-l-1} of h(0, z_1..z_{k-1}) h(0, z_1..z_{l-1}, z_k..z_{2k-l-1}).
// For l == k this is the integral of h(0, z) alone.
Integral mc_overlap_integral(const Constraint& c, int d, int l, std::uint64_t samples, std::uint64_t seed) {
  const int k = c.arity();
  const int free_points = 2 * k - l - 1;
  const double support = c.bound();
  const double cell_volume = unit_ball_volume(d) * std::pow(support, d);
  const double volume = std::pow(cell_volume, free_points);

  BallSampler sampler(d, support, seed);
  Eigen::MatrixXd z(d, free_points);
  Eigen::MatrixXd first(d, k);
  Eigen::MatrixXd second(d, k);
  first.col(0).setZero();
  second.col(0).setZero();

  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    sampler.fill(z);
    for (int i = 1; i < k; ++i) first.col(i) = z.col(i - 1);
    if (!c.evaluate(first)) continue;
    if (l == k) {
      ++hits;
      continue;
    }
    for (int i = 1; i < l; ++i) second.col(i) = z.col(i - 1);
    for (int i = l; i < k; ++i) second.col(i) = z.col(k - 1 + (i - l));
    if (c.evaluate(second)) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {volume * p, volume * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

}  // namespace

GeometricConstants geometric_constants(const Constraint& c, int d, std::optional<std::uint64_t> mc_samples,
                                       std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::ParameterOutOfRange, "dimension must be positive");
  const int k = c.arity();
  GeometricConstants gc;
  gc.k = k;
  gc.d = d;
  const double sphere = unit_sphere_area(d);

  if (k == 1) {
    if (c.kind() != ConstraintKind::AlwaysOne) throw Error(ErrorCode::UnsupportedConstraint, "k = 1 needs always_one");
    gc.ck = sphere;
    gc.dkl[1] = 1.0;
    if (mc_samples) gc.monte_carlo = MonteCarloInfo{*mc_samples, 0.0, {{1, 0.0}}};
    return gc;
  }
  if (c.radius() <= 0.0) throw Error(ErrorCode::UnsupportedConstraint, "constraint support has zero volume");

  if (k == 2 && !mc_samples) {
    // Every built-in kind reduces to |z| <= t for a pair.
    const double ball = unit_ball_volume(d) * std::pow(c.radius(), d);
    gc.ck = std::sqrt(sphere * ball / 2.0);
    gc.dkl[2] = ball;
    gc.dkl[1] = ball * ball;
    return gc;
  }

  const std::uint64_t samples = mc_samples.value_or(kDefaultMcSamples);
  if (samples < 2) throw Error(ErrorCode::ParameterOutOfRange, "need at least two Monte Carlo samples");
  MonteCarloInfo info;
  info.samples = samples;
  for (int l = 1; l <= k; ++l) {
    const Integral integral = mc_overlap_integral(c, d, l, samples, seed + static_cast<std::uint64_t>(l));
    gc.dkl[l] = integral.value;
    info.dkl_standard_error[l] = integral.standard_error;
  }
  // D_{k,k} is the integral defining C_k.
  const double base = gc.dkl[k];
  if (!(base > 0.0)) throw Error(ErrorCode::UnsupportedConstraint, "no Monte Carlo sample satisfied the constraint");
  gc.ck = std::pow(sphere / std::tgamma(k + 1.0) * base, 1.0 / k);
  info.standard_error = gc.ck * info.dkl_standard_error[k] / (k * base);
  gc.monte_carlo = info;
  return gc;
}

}  // namespace layered_hill
