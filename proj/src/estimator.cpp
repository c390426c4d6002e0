#include "layered_hill/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace layered_hill {

std::string_view to_string(HillCut cut) noexcept {
  return cut == HillCut::Definition ? "definition" : "traditional";
}

HillCut hill_cut_from_string(std::string_view name) {
  if (name == "definition") return HillCut::Definition;
  if (name == "traditional") return HillCut::Traditional;
  throw Error(ErrorCode::ConfigInvalid, "cut must be 'definition' or 'traditional'");
}

std::string_view to_string(RegimeTag tag) noexcept {
  switch (tag) {
    case RegimeTag::Vanishing: return "vanishing";
    case RegimeTag::Constant: return "constant";
    case RegimeTag::Diverging: return "diverging";
  }
  return "unknown";
}

std::uint64_t checked_power(std::uint64_t m, int k) {
  if (k < 1) throw Error(ErrorCode::ParameterOutOfRange, "arity must be positive");
  std::uint64_t result = 1;
  for (int i = 0; i < k; ++i) {
    if (m != 0 && result > std::numeric_limits<std::uint64_t>::max() / m)
      throw Error(ErrorCode::ParameterOutOfRange, "m^k overflows");
    result *= m;
  }
  return result;
}

std::uint64_t required_values(std::uint64_t m, int k, HillCut cut) {
  const std::uint64_t top = checked_power(m, k);
  return cut == HillCut::Traditional ? top + 1 : top;
}

double layered_hill(const OrderStatStream& stream, std::uint64_t m, HillCut cut) {
  if (m < 1) throw Error(ErrorCode::ParameterOutOfRange, "m must be positive");
  const std::uint64_t top = checked_power(m, stream.k);
  const std::uint64_t need = required_values(m, stream.k, cut);
  if (stream.values.size() < need) {
    throw Error(ErrorCode::InsufficientExtremes,
                "need " + std::to_string(need) + " qualifying tuples, have " + std::to_string(stream.values.size()) +
                    (stream.exhausted ? "" : " (stream cut short)"));
  }
  const double denominator = stream.values[need - 1];
  if (!(denominator > 0.0)) throw Error(ErrorCode::InsufficientExtremes, "cut-off order statistic is zero");

  const double log_denominator = std::log(denominator);
  double sum = 0.0;
  for (std::uint64_t j = 0; j < top; ++j) sum += std::log(stream.values[j]) - log_denominator;
  return sum / static_cast<double>(top);
}

double alpha_hat(double h, int k, int d) {
  if (!(h > 0.0)) throw Error(ErrorCode::NonPositiveH, "H must be positive to invert");
  return static_cast<double>(d) / k + 1.0 / (k * h);
}

namespace {

void check_alpha(int k, int l, int d, double alpha) {
  if (k < 1 || l < 1 || l > k) throw Error(ErrorCode::ParameterOutOfRange, "need 1 <= l <= k");
  if (d < 1) throw Error(ErrorCode::ParameterOutOfRange, "dimension must be positive");
  if (!(alpha * k - d > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "need alpha k > d");
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

double limit_coeff_L(int k, int l, int d, double alpha, const GeometricConstants& gc) {
  check_alpha(k, l, d, alpha);
  const double ak = alpha * k - d;
  const double binom = static_cast<double>(binomial(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l)));
  return binom * ak / (factorial(k - l) * (alpha * (2 * k - l) - d)) * gc.D(l) / gc.D(k);
}

double variance_constant_A(int k, int l, int d, double alpha, const GeometricConstants& gc) {
  check_alpha(k, l, d, alpha);
  const double ak = alpha * k - d;
  const double a2 = alpha * (2 * k - l) - d;
  return limit_coeff_L(k, l, d, alpha, gc) * (a2 * a2 - 2.0 * alpha * (k - l) * ak) / (a2 * a2 * ak * ak);
}

Regime select_regime(double beta, int k, int d, double alpha_hat_value, double tol) {
  const double threshold = static_cast<double>(d) / (alpha_hat_value * k);
  if (beta < threshold - tol) return {RegimeTag::Vanishing, std::nullopt};
  if (beta > threshold + tol) return {RegimeTag::Diverging, std::nullopt};
  return {RegimeTag::Constant, std::nullopt};
}

std::optional<double> scaling_tau(int k, std::uint64_t m, const Regime& regime) {
  if (regime.tag == RegimeTag::Diverging && k >= 2) return std::nullopt;
  return std::pow(static_cast<double>(m), k);
}

double regime_variance(int k, int d, double alpha, const Regime& regime, const GeometricConstants& gc) {
  switch (regime.tag) {
    case RegimeTag::Vanishing:
      return variance_constant_A(k, k, d, alpha, gc);
    case RegimeTag::Constant: {
      if (!regime.xi) throw Error(ErrorCode::MissingXi, "constant regime needs a user-supplied xi");
      double total = 0.0;
      for (int l = 1; l <= k; ++l) total += std::pow(*regime.xi, k - l) * variance_constant_A(k, l, d, alpha, gc);
      return total;
    }
    case RegimeTag::Diverging:
      return variance_constant_A(k, 1, d, alpha, gc);
  }
  return 0.0;
}

double normalized_statistic(double h, int k, int d, std::uint64_t m, double alpha_center,
                            double alpha_for_variance, const Regime& regime, const GeometricConstants& gc) {
  if (regime.tag == RegimeTag::Diverging && k >= 2)
    throw Error(ErrorCode::UnsupportedRegime, "diverging regime needs n f(R_k), which is not estimable");
  if (!(alpha_center * k - d > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "need alpha_center k > d");
  const double variance = regime_variance(k, d, alpha_for_variance, regime, gc);
  const double centred = h - 1.0 / (alpha_center * k - d);
  return std::pow(static_cast<double>(m), 0.5 * k) * centred / std::sqrt(variance);
}

ConfidenceInterval confidence_interval(double h, int k, int d, std::uint64_t m, double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error(ErrorCode::ProbabilityOutOfRange, "gamma must lie in [0, 1)");
  const double a_hat = alpha_hat(h, k, d);
  // A_{k,k,alpha} = (alpha k - d)^{-2}, so its square root is 1/(alpha k - d).
  const double sqrt_a = 1.0 / (a_hat * k - d);
  const double c_upper = gamma == 0.0 ? 0.0 : inverse_normal_cdf(0.5 * (1.0 + gamma));
  const double c_lower = -c_upper;
  const double spread = std::pow(static_cast<double>(m), -0.5 * k) * sqrt_a;

  const double low_den = h - c_lower * spread;
  const double high_den = h - c_upper * spread;
  if (!(low_den > 0.0) || !(high_den > 0.0))
    throw Error(ErrorCode::DegenerateInterval, "H is too small for the requested level");
  return {(1.0 / low_den + d) / k, (1.0 / high_den + d) / k, gamma};
}

double theoretical_radius_Rk(double t, int k, int d, double alpha, double power_law_c) {
  const double ak = alpha * k - d;
  if (!(t > 0.0) || !(power_law_c > 0.0) || !(ak > 0.0) || k < 1)
    throw Error(ErrorCode::ParameterOutOfRange, "need t > 0, C > 0 and alpha k > d");
  return std::pow(std::pow(t * power_law_c, k) / ak, 1.0 / ak);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::ProbabilityOutOfRange, "p must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double e[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1.0);
  }
  // One Halley step against the exact CDF.
  const double err = normal_cdf(x) - p;
  const double u = err * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

EstimateReport estimate(const PointCloudd& cloud, const Constraint& c, std::uint64_t m,
                        const EstimateOptions& options) {
  const int k = c.arity();
  const int d = static_cast<int>(cloud.dim());
  if (m < 1) throw Error(ErrorCode::ParameterOutOfRange, "m must be positive");

  const std::uint64_t need = required_values(m, k, options.cut);
  const OrderStatStream stream = top_tuple_values(cloud, c, need);

  EstimateReport report;
  report.k = k;
  report.d = d;
  report.m = m;
  report.h = layered_hill(stream, m, options.cut);
  report.alpha_hat = alpha_hat(report.h, k, d);
  report.denominator = stream.values[need - 1];

  double beta = 0.0;
  if (options.beta) {
    beta = *options.beta;
  } else if (cloud.size() > 1) {
    beta = std::log(static_cast<double>(m)) / std::log(static_cast<double>(cloud.size()));
  }
  report.regime = select_regime(beta, k, d, report.alpha_hat, options.regime_tol);
  if (report.regime.tag == RegimeTag::Constant) report.regime.xi = options.xi;

  report.tau = scaling_tau(k, m, report.regime);
  if (report.alpha_hat * k - d > 0.0 && (report.regime.tag != RegimeTag::Constant || report.regime.xi)) {
    const GeometricConstants gc = geometric_constants(c, d);
    report.variance_a = regime_variance(k, d, report.alpha_hat, report.regime, gc);
  }
  if (options.gamma) report.ci = confidence_interval(report.h, k, d, m, *options.gamma);
  return report;
}

}  // namespace layered_hill
