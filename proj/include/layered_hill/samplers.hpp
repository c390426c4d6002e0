#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "layered_hill/point_cloud.hpp"

namespace layered_hill {

enum class RadialFamily { PowerLaw, IsotropicStable, FrechetRadial };

std::string_view to_string(RadialFamily family) noexcept;
RadialFamily radial_family_from_string(std::string_view name);

/// Spherically symmetric law in R^d, described by its radial behaviour.
///
/// For PowerLaw, `alpha` is the exponent of the density C|x|^{-alpha} on
/// |x| >= 1. For IsotropicStable and FrechetRadial it is the tail index of
/// the radius |X|, so the density decays like |x|^{-(alpha + d)}.
struct RadialModel {
  RadialFamily family = RadialFamily::PowerLaw;
  double alpha = 2.5;
  int d = 2;

  void validate() const;
  /// Exponent of the density's regularly varying tail.
  double density_exponent() const;
  /// Normaliser C = (alpha - d) / s_{d-1} of the power-law density.
  double power_law_constant() const;
};

/// Generator for one replicate, fully determined by (master seed, stream id).
class SeededRng {
 public:
  SeededRng(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  double gaussian();
  double exponential();
  std::uint64_t poisson(double mean);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Inverse of the survival function r^{d - alpha} on r >= 1.
double power_law_radius(double alpha, int d, double u);
/// Inverse of the Frechet CDF exp(-r^{-alpha}).
double frechet_radius(double alpha, double u);
/// Chambers-Mallows-Stuck variate of S_a(1, 1, 0), 0 < a < 1, from
/// V uniform on (-pi/2, pi/2) and W standard exponential.
double positive_stable_cms(double a, double v, double w);

PointCloudd sample_cloud(const RadialModel& model, std::uint64_t n, SeededRng& rng, bool poissonize = false);

/// Drops the `remove_count` points of largest norm (ties by ascending index);
/// retained points keep their relative order.
PointCloudd remove_top_extremes(const PointCloudd& cloud, std::uint64_t remove_count);

/// Number of extremes removed for missing rate delta: round(delta m), halves up.
std::uint64_t missing_count(double delta, std::uint64_t m);

}  // namespace layered_hill
