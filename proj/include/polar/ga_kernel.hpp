#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace polar {

enum class GaVariant { ImprovedLogDomain, ConventionalChung, HaModified };

namespace ga {

// piecewise-fit thresholds and coefficients
inline constexpr double kGamma0 = 0.2;
inline constexpr double kGamma1 = 0.7;
inline constexpr double kGamma2 = 10.0;
inline constexpr double kA0 = -0.002706;
inline constexpr double kA1 = -0.476711;
inline constexpr double kA2 = 0.0512;
inline constexpr double kChungA = -0.4527;
inline constexpr double kChungB = 0.0218;
inline constexpr double kChungC = 0.86;
inline constexpr double kKappa0 = 8.554;
inline constexpr double kHaAlpha = -0.4856;
inline constexpr double kHaBeta = 0.0564;
inline constexpr double kHaThreshold = 0.867861;

inline constexpr double kBisectRelTol = 1e-12;
inline constexpr int kBisectMaxIter = 200;

inline double q_func(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

// bisection on the monotone-decreasing q_func; tight inner stop so the
// relative round-trip contract holds even for p near the subnormal range
inline double q_inv(double p) {
  if (!(p > 0.0) || p > 0.5 || std::isnan(p))
    throw std::domain_error("q_inv: p must be in (0, 1/2]");
  if (p == 0.5) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (q_func(hi) > p && hi < 64.0) hi *= 2.0;
  for (int i = 0; i < kBisectMaxIter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (q_func(mid) > p) lo = mid; else hi = mid;
    if (hi - lo <= 1e-16 * hi) break;
  }
  return 0.5 * (lo + hi);
}

// large-gamma log branch, exposed separately so the inverse can bisect on it
inline double xi_tail(double g) {
  const double pi = std::numbers::pi;
  return -0.25 * g + 0.5 * std::log(pi) - 0.5 * std::log(g) +
         std::log1p(-pi * pi / (4.0 * g) + kKappa0 / (g * g));
}

inline double xi_hat(double g) {
  if (!(g > 0.0) || !std::isfinite(g))
    throw std::domain_error("xi_hat: gamma must be positive and finite");
  if (g <= kGamma0) return -0.5 * g + 0.125 * g * g - 0.125 * g * g * g;
  if (g <= kGamma1) return kA0 + kA1 * g + kA2 * g * g;
  if (g < kGamma2) return kChungA * std::pow(g, kChungC) + kChungB;
  return xi_tail(g);
}

struct ZThresholds {
  double z0, z1, z2;
};

// branch switch points of the inverse, derived from the forward map at
// startup so the two stay consistent by construction
inline const ZThresholds& z_thresholds() {
  static const ZThresholds z{xi_hat(kGamma0), xi_hat(kGamma1), xi_hat(kGamma2)};
  return z;
}

inline double xi_hat_inv(double z) {
  if (!(z < 0.0)) throw std::domain_error("xi_hat_inv: z must be negative");
  const ZThresholds& Z = z_thresholds();
  if (z > Z.z0) return -2.0 * z + z * z + z * z * z;
  if (z >= Z.z1) {
    // z == z0 is routed here: the quadratic is exact at its own seam while
    // the series inverse misses the round-trip tolerance there
    double disc = kA1 * kA1 - 4.0 * kA2 * (kA0 - z);
    return (-kA1 - std::sqrt(disc)) / (2.0 * kA2);
  }
  if (z > Z.z2) return std::pow((z - kChungB) / kChungA, 1.0 / kChungC);
  double lo = kGamma2;
  double hi = std::max(4.0 * kGamma2, -8.0 * z);
  while (xi_tail(hi) > z) hi *= 2.0;
  for (int i = 0; i < kBisectMaxIter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (xi_tail(mid) > z) lo = mid; else hi = mid;
    if (hi - lo <= kBisectRelTol * hi) break;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline double chung_phi(double g) {
  if (g <= kGamma2) return std::exp(kChungA * std::pow(g, kChungC) + kChungB);
  const double pi = std::numbers::pi;
  return std::sqrt(pi / g) * std::exp(-0.25 * g) * (1.0 - 10.0 / (7.0 * g));
}

inline double ha_phi(double g) {
  if (g < kHaThreshold) return std::exp(kHaAlpha * g + kHaBeta * g * g);
  return chung_phi(g);
}

// solve phi(g') = phi(g) * (2 - phi(g)) by bisection
inline double check_phi_variant(double g, double (*phi)(double)) {
  double p = phi(g);
  double t = p * (2.0 - p);
  double lo = 1e-30;
  if (!(phi(lo) > t)) return 0.0;  // t rounded to 1: input effectively zero
  double hi = 40.0;
  while (phi(hi) > t && hi < 1e7) hi *= 2.0;
  for (int i = 0; i < kBisectMaxIter; ++i) {
    double mid = 0.5 * (lo + hi);
    if (phi(mid) > t) lo = mid; else hi = mid;
    if (hi - lo <= kBisectRelTol * hi) break;
  }
  return 0.5 * (lo + hi);
}

inline double check_improved(double g) {
  if (g <= kGamma0)
    return 0.5 * g * g - 0.5 * g * g * g + (2.0 / 3.0) * g * g * g * g;
  double z = xi_hat(g);
  double w = z + std::log(2.0 - std::exp(z));
  return xi_hat_inv(w);
}

}  // namespace detail

inline double check_node_transform(double g, GaVariant variant) {
  if (std::isnan(g) || g < 0.0)
    throw std::domain_error("check_node_transform: gamma must be >= 0");
  if (g == 0.0) return 0.0;
  switch (variant) {
    case GaVariant::ImprovedLogDomain:
      return detail::check_improved(g);
    case GaVariant::ConventionalChung:
      return detail::check_phi_variant(g, detail::chung_phi);
    case GaVariant::HaModified:
      return detail::check_phi_variant(g, detail::ha_phi);
  }
  throw std::invalid_argument("check_node_transform: bad variant");
}

inline double variable_node_transform(double g) {
  if (std::isnan(g) || g < 0.0)
    throw std::domain_error("variable_node_transform: gamma must be >= 0");
  double out = 2.0 * g;
  if (!std::isfinite(out)) return std::numeric_limits<double>::max();
  return out;
}

}  // namespace ga
}  // namespace polar
