#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "layered_hill/constraint.hpp"
#include "layered_hill/tuple_order_stats.hpp"

namespace layered_hill {

/// Which order statistic divides the top m^k values.
///
/// `Definition` uses U_k(m^k) itself (the m^k-th term contributes log 1 = 0).
/// `Traditional` uses U_k(m^k + 1), the classical Hill denominator X_(m+1).
enum class HillCut { Definition, Traditional };

std::string_view to_string(HillCut cut) noexcept;
HillCut hill_cut_from_string(std::string_view name);

/// Number of stream values layered_hill() reads for cut-off m.
std::uint64_t required_values(std::uint64_t m, int k, HillCut cut = HillCut::Definition);

/// m^k with overflow checking.
std::uint64_t checked_power(std::uint64_t m, int k);

/// H = m^{-k} * sum_{j <= m^k} log(U_k(j) / denominator).
double layered_hill(const OrderStatStream& stream, std::uint64_t m, HillCut cut = HillCut::Definition);

/// Tail exponent from H: d/k + 1/(k H).
double alpha_hat(double h, int k, int d);

// -- geometry of the constraint -------------------------------------------

/// Surface area of the unit sphere S^{d-1}.
double unit_sphere_area(int d);
/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

struct MonteCarloInfo {
  std::uint64_t samples = 0;
  double standard_error = 0.0;               ///< of C_k
  std::map<int, double> dkl_standard_error;  ///< of each D_{k,l}
};

struct GeometricConstants {
  int k = 1;
  int d = 1;
  double ck = 0.0;
  std::map<int, double> dkl;  ///< l = 1..k
  std::optional<MonteCarloInfo> monte_carlo;  ///< unset for closed forms

  double D(int l) const;
};

/// C_k and D_{k,l}. Closed forms for k <= 2; integration by uniform sampling
/// of the constraint's support otherwise, or whenever mc_samples is given.
GeometricConstants geometric_constants(const Constraint& c, int d, std::optional<std::uint64_t> mc_samples = {},
                                       std::uint64_t seed = 0x5eedULL);

/// Limit-process coefficient L_{k,l}.
double limit_coeff_L(int k, int l, int d, double alpha, const GeometricConstants& gc);

/// Variance constant A_{k,l,alpha}.
double variance_constant_A(int k, int l, int d, double alpha, const GeometricConstants& gc);

// -- regimes and normalisation --------------------------------------------

enum class RegimeTag { Vanishing, Constant, Diverging };

std::string_view to_string(RegimeTag tag) noexcept;

struct Regime {
  RegimeTag tag = RegimeTag::Vanishing;
  std::optional<double> xi;  ///< only meaningful for Constant
};

inline constexpr double kDefaultRegimeTolerance = 0.02;

/// Classifies the limit of n f(R_k(C_k n / m)) for m = n^beta by comparing
/// beta with d / (alpha_hat k).
Regime select_regime(double beta, int k, int d, double alpha_hat, double tol = kDefaultRegimeTolerance);

/// Scaling tau_{k,n}; empty when it needs the unknown density (Diverging, k >= 2).
std::optional<double> scaling_tau(int k, std::uint64_t m, const Regime& regime);

/// Variance of the limiting normal for the given regime, evaluated at alpha.
double regime_variance(int k, int d, double alpha, const Regime& regime, const GeometricConstants& gc);

/// m^k tau^{-1/2} (H - 1/(alpha_center k - d)) scaled to unit variance, with
/// the variance constant evaluated at alpha_for_variance.
double normalized_statistic(double h, int k, int d, std::uint64_t m, double alpha_center,
                            double alpha_for_variance, const Regime& regime, const GeometricConstants& gc);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double gamma = 0.0;
};

/// Asymptotic gamma-level interval for alpha under the Vanishing regime,
/// with symmetric normal quantiles.
ConfidenceInterval confidence_interval(double h, int k, int d, std::uint64_t m, double gamma);

/// R_k(t) for the power law f(r) = C r^{-alpha} 1{r >= 1}.
double theoretical_radius_Rk(double t, int k, int d, double alpha, double power_law_c);

// -- normal distribution helpers ------------------------------------------

double normal_cdf(double x);
/// Standard normal quantile (Acklam's rational approximation plus one
/// Halley step; absolute error well below 1e-9).
double inverse_normal_cdf(double p);

// -- whole-sample estimate ------------------------------------------------

struct EstimateReport {
  int k = 1;
  int d = 1;
  std::uint64_t m = 1;
  double h = 0.0;
  double alpha_hat = 0.0;
  double denominator = 0.0;
  Regime regime;
  std::optional<double> variance_a;
  std::optional<double> tau;
  std::optional<ConfidenceInterval> ci;
};

struct EstimateOptions {
  HillCut cut = HillCut::Definition;
  std::optional<double> gamma;
  /// Regime is chosen from beta = log m / log n unless given here.
  std::optional<double> beta;
  double regime_tol = kDefaultRegimeTolerance;
  std::optional<double> xi;
};

EstimateReport estimate(const PointCloudd& cloud, const Constraint& c, std::uint64_t m,
                        const EstimateOptions& options = {});

/// JSON object with keys k, d, m, H, alpha_hat, regime, variance_A, tau,
/// ci_lower, ci_upper, gamma (absent values are null).
std::string to_json(const EstimateReport& report);
std::string to_json(const GeometricConstants& gc);

}  // namespace layered_hill
