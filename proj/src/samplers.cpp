#include "layered_hill/samplers.hpp"

#include <cmath>
#include <string>

#include "layered_hill/error.hpp"
#include "layered_hill/estimator.hpp"

namespace layered_hill {

std::string_view to_string(RadialFamily family) noexcept {
  switch (family) {
    case RadialFamily::PowerLaw: return "power_law";
    case RadialFamily::IsotropicStable: return "stable";
    case RadialFamily::FrechetRadial: return "frechet";
  }
  return "unknown";
}

RadialFamily radial_family_from_string(std::string_view name) {
  if (name == "power_law") return RadialFamily::PowerLaw;
  if (name == "stable") return RadialFamily::IsotropicStable;
  if (name == "frechet") return RadialFamily::FrechetRadial;
  throw Error(ErrorCode::ConfigInvalid, "unknown model family '" + std::string(name) + "'");
}

void RadialModel::validate() const {
  if (d < 1) throw Error(ErrorCode::ParameterOutOfRange, "dimension must be positive");
  switch (family) {
    case RadialFamily::PowerLaw:
      if (!(alpha > d)) throw Error(ErrorCode::ParameterOutOfRange, "power law needs alpha > d");
      break;
    case RadialFamily::IsotropicStable:
      if (!(alpha > 0.0 && alpha < 2.0)) throw Error(ErrorCode::ParameterOutOfRange, "stable law needs 0 < alpha < 2");
      break;
    case RadialFamily::FrechetRadial:
      if (!(alpha > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "Frechet law needs alpha > 0");
      break;
  }
}

double RadialModel::density_exponent() const {
  return family == RadialFamily::PowerLaw ? alpha : alpha + d;
}

double RadialModel::power_law_constant() const { return (alpha - d) / unit_sphere_area(d); }

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL))) {}

double SeededRng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededRng::gaussian() { return std::normal_distribution<double>()(engine_); }

double SeededRng::exponential() { return -std::log(uniform()); }

std::uint64_t SeededRng::poisson(double mean) {
  return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

double power_law_radius(double alpha, int d, double u) { return std::pow(u, -1.0 / (alpha - d)); }

double frechet_radius(double alpha, double u) { return std::pow(-std::log(u), -1.0 / alpha); }

double positive_stable_cms(double a, double v, double w) {
  // Skewness 1 gives B = pi/2 and S = cos(pi a / 2)^{-1/a}.
  const double shift = 0.5 * M_PI;
  const double scale = std::pow(std::cos(0.5 * M_PI * a), -1.0 / a);
  return scale * std::sin(a * (v + shift)) / std::pow(std::cos(v), 1.0 / a) *
         std::pow(std::cos(v - a * (v + shift)) / w, (1.0 - a) / a);
}

PointCloudd sample_cloud(const RadialModel& model, std::uint64_t n, SeededRng& rng, bool poissonize) {
  model.validate();
  const std::uint64_t count = poissonize ? rng.poisson(static_cast<double>(n)) : n;
  const int d = model.d;
  Eigen::MatrixXd points(d, static_cast<Eigen::Index>(count));

  // Sub-Gaussian representation X = sqrt(2 Lambda) G with Lambda ~
  // S_{alpha/2}(cos(pi alpha / 4)^{2/alpha}, 1, 0). Then E exp(-s Lambda) =
  // exp(-s^{alpha/2}), so E exp(i <theta, X>) = exp(-|theta|^alpha).
  const double half = 0.5 * model.alpha;
  const double subordinator_scale = std::pow(std::cos(0.25 * M_PI * model.alpha), 1.0 / half);

  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    auto x = points.col(j);
    if (model.family == RadialFamily::IsotropicStable) {
      const double v = M_PI * (rng.uniform() - 0.5);
      const double w = rng.exponential();
      const double lambda = subordinator_scale * positive_stable_cms(half, v, w);
      const double factor = std::sqrt(2.0 * lambda);
      for (int c = 0; c < d; ++c) x(c) = factor * rng.gaussian();
      continue;
    }
    double norm = 0.0;
    do {
      for (int c = 0; c < d; ++c) x(c) = rng.gaussian();
      norm = x.norm();
    } while (norm == 0.0);
    const double u = rng.uniform();
    const double radius = model.family == RadialFamily::PowerLaw ? power_law_radius(model.alpha, d, u)
                                                                 : frechet_radius(model.alpha, u);
    x *= radius / norm;
  }
  return PointCloudd(std::move(points));
}

PointCloudd remove_top_extremes(const PointCloudd& cloud, std::uint64_t remove_count) {
  if (remove_count > static_cast<std::uint64_t>(cloud.size()))
    throw Error(ErrorCode::RemoveCountExceedsCloud, "cannot remove more points than the cloud holds");
  if (remove_count == 0) return cloud;
  const auto order = descending_norm_order(cloud);
  std::vector<char> removed(order.size(), 0);
  for (std::uint64_t i = 0; i < remove_count; ++i) removed[static_cast<std::size_t>(order[i])] = 1;
  std::vector<Eigen::Index> keep;
  keep.reserve(order.size() - remove_count);
  for (std::size_t i = 0; i < removed.size(); ++i)
    if (!removed[i]) keep.push_back(static_cast<Eigen::Index>(i));
  if (keep.empty()) return PointCloudd(cloud.dim());
  return cloud.select(keep);
}

std::uint64_t missing_count(double delta, std::uint64_t m) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "missing rate must be non-negative");
  return static_cast<std::uint64_t>(std::floor(delta * static_cast<double>(m) + 0.5));
}

}  // namespace layered_hill
