#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "polar/codec.hpp"
#include "polar/ga_kernel.hpp"

namespace polar {

enum class Method { ImprovedGa, ConventionalChung, HaGa, Flipping };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::ImprovedGa: return "improved-ga";
    case Method::ConventionalChung: return "conventional-ga";
    case Method::HaGa: return "ha-ga";
    case Method::Flipping: return "flipping";
  }
  throw std::invalid_argument("method_name: bad method");
}

inline Method method_from_name(const std::string& s) {
  if (s == "improved-ga") return Method::ImprovedGa;
  if (s == "conventional-ga") return Method::ConventionalChung;
  if (s == "ha-ga") return Method::HaGa;
  if (s == "flipping") return Method::Flipping;
  throw std::invalid_argument("unknown method: " + s);
}

inline GaVariant ga_variant(Method m) {
  switch (m) {
    case Method::ImprovedGa: return GaVariant::ImprovedLogDomain;
    case Method::ConventionalChung: return GaVariant::ConventionalChung;
    case Method::HaGa: return GaVariant::HaModified;
    default: throw std::invalid_argument("ga_variant: not a GA method");
  }
}

struct DesignSnr {
  double linear;
  double db;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class ReliabilityKind { MeanLlr, FlipProb };

// per-bit-channel quality for all N inputs, indexed in the u domain (same
// index space as the encoder's info set and the decoder's decision order)
struct ReliabilityVector {
  ReliabilityKind kind;
  int n;
  double design_snr_linear;
  Method method;
  std::vector<double> values;
};

struct PolarCodeSpec {
  int n = 0;
  std::uint32_t k = 0;
  Method method = Method::ImprovedGa;
  double design_snr_db = 0.0;
  std::vector<std::uint32_t> info_set;  // ascending u-domain indices

  std::size_t block_size() const { return std::size_t(1) << n; }
};

namespace detail {

inline void check_construction_args(int n, double snr_linear) {
  if (n < 1 || n > 22) throw std::invalid_argument("construction: n must be in [1, 22]");
  if (!(snr_linear > 0.0) || !std::isfinite(snr_linear))
    throw std::invalid_argument("construction: SNR must be positive");
}

// literal in-place butterfly: stage doubling with the check child written
// over the parent slot and the variable child at the mirrored slot
template <class CheckFn, class VarFn>
std::vector<double> polarize(int n, double first, CheckFn&& check, VarFn&& var) {
  const std::size_t N = std::size_t(1) << n;
  std::vector<double> g(N, 0.0);
  g[0] = first;
  for (int i = 1; i <= n; ++i) {
    const std::size_t J = std::size_t(1) << i;
    for (std::size_t j = 0; j < J / 2; ++j) {
      double u = g[j];
      g[j] = check(u);
      g[j + J / 2] = var(u);
    }
  }
  // butterfly order is the bit-reversal of the u-domain index
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = g[bit_reverse(std::uint32_t(i), n)];
  return out;
}

}  // namespace detail

inline ReliabilityVector run_ga(int n, double snr_linear, GaVariant variant) {
  detail::check_construction_args(n, snr_linear);
  auto values = detail::polarize(
      n, 4.0 * snr_linear,
      [&](double u) { return ga::check_node_transform(u, variant); },
      [](double u) { return ga::variable_node_transform(u); });
  Method m = variant == GaVariant::ImprovedLogDomain ? Method::ImprovedGa
             : variant == GaVariant::ConventionalChung ? Method::ConventionalChung
                                                       : Method::HaGa;
  return {ReliabilityKind::MeanLlr, n, snr_linear, m, std::move(values)};
}

inline constexpr double kFlipProbFloor = 1e-300;

inline ReliabilityVector run_flipping(int n, double snr_linear) {
  detail::check_construction_args(n, snr_linear);
  auto clamp = [](double p) { return std::clamp(p, kFlipProbFloor, 0.5); };
  auto values = detail::polarize(
      n, ga::q_func(std::sqrt(2.0 * snr_linear)),
      [&](double z) { return clamp(2.0 * z * (1.0 - z)); },
      [&](double z) { return clamp(ga::q_func(std::numbers::sqrt2 * ga::q_inv(z))); });
  return {ReliabilityKind::FlipProb, n, snr_linear, Method::Flipping, std::move(values)};
}

inline ReliabilityVector run_construction(int n, double snr_linear, Method method) {
  if (method == Method::Flipping) return run_flipping(n, snr_linear);
  return run_ga(n, snr_linear, ga_variant(method));
}

namespace detail {

// value ordering: higher mean LLR is better, lower flip probability is better
inline bool better(ReliabilityKind kind, double a, double b) {
  return kind == ReliabilityKind::MeanLlr ? a > b : a < b;
}

}  // namespace detail

// top-K selection with the saturation pre-filter: clearly good channels are
// accepted outright, clearly dead ones rejected, only the middle band sorted;
// falls back to a full sort when the bands cannot decide K
inline PolarCodeSpec select_info_set(const ReliabilityVector& rel, std::uint32_t K) {
  const std::size_t N = rel.values.size();
  if (K < 1 || K > N) throw std::invalid_argument("select_info_set: K out of range");

  auto cmp = [&](std::uint32_t a, std::uint32_t b) {
    if (rel.values[a] != rel.values[b])
      return detail::better(rel.kind, rel.values[a], rel.values[b]);
    return a < b;
  };

  std::vector<std::uint32_t> accepted, middle;
  accepted.reserve(N);
  middle.reserve(N);
  std::size_t rejected = 0;
  const bool mean_kind = rel.kind == ReliabilityKind::MeanLlr;
  const double hi_thr = mean_kind ? 1e6 : kFlipProbFloor;
  const double lo_thr = mean_kind ? 1e-6 : 0.5 - 1e-9;
  for (std::uint32_t i = 0; i < N; ++i) {
    double v = rel.values[i];
    bool good = mean_kind ? v > hi_thr : v <= hi_thr;
    bool dead = mean_kind ? v < lo_thr : v > lo_thr;
    if (good) accepted.push_back(i);
    else if (dead) ++rejected;
    else middle.push_back(i);
  }

  std::vector<std::uint32_t> info;
  if (accepted.size() > K || accepted.size() + middle.size() < K) {
    // bands cannot decide: full sort
    info.resize(N);
    std::iota(info.begin(), info.end(), 0u);
    std::sort(info.begin(), info.end(), cmp);
    info.resize(K);
  } else {
    std::sort(middle.begin(), middle.end(), cmp);
    info = std::move(accepted);
    info.insert(info.end(), middle.begin(), middle.begin() + (K - info.size()));
  }
  std::sort(info.begin(), info.end());

  PolarCodeSpec code;
  code.n = rel.n;
  code.k = K;
  code.method = rel.method;
  code.design_snr_db = linear_to_db(rel.design_snr_linear);
  code.info_set = std::move(info);
  return code;
}

struct BlerEstimate {
  double value = 0.0;
  std::vector<double> per_bit;  // error probability per info channel, 𝓘 order
};

inline BlerEstimate estimate_bler(const PolarCodeSpec& code, const ReliabilityVector& rel) {
  if (rel.n != code.n || rel.values.size() != code.block_size())
    throw std::invalid_argument("estimate_bler: reliability/code dimension mismatch");
  BlerEstimate est;
  est.per_bit.reserve(code.info_set.size());
  double log_ok = 0.0;
  for (auto i : code.info_set) {
    double v = rel.values.at(i);
    double p = rel.kind == ReliabilityKind::MeanLlr ? ga::q_func(std::sqrt(v / 2.0)) : v;
    est.per_bit.push_back(p);
    log_ok += std::log1p(-p);
  }
  est.value = -std::expm1(log_ok);
  return est;
}

inline double min_estimated_bler(int n, std::uint32_t K, double snr_linear, Method method) {
  ReliabilityVector rel = run_construction(n, snr_linear, method);
  PolarCodeSpec code = select_info_set(rel, K);
  return estimate_bler(code, rel).value;
}

// smallest 0.01-dB grid point in [-10, 10] whose minimum estimated BLER
// falls at or below the top of the target band; errors if the curve skips
// the band entirely or never reaches it
inline DesignSnr find_design_snr(int n, std::uint32_t K, double target_bler_lo,
                                 double target_bler_hi, Method method) {
  if (!(target_bler_lo > 0.0) || !(target_bler_lo < target_bler_hi) ||
      !(target_bler_hi < 1.0))
    throw std::invalid_argument("find_design_snr: need 0 < lo < hi < 1");
  auto grid_db = [](int i) { return -10.0 + 0.01 * i; };
  auto f = [&](int i) { return min_estimated_bler(n, K, db_to_linear(grid_db(i)), method); };
  int lo_i = 0, hi_i = 2000;
  if (f(hi_i) > target_bler_hi)
    throw std::runtime_error("find_design_snr: no design SNR in [-10, 10] dB window");
  if (f(lo_i) > target_bler_hi) {
    while (hi_i - lo_i > 1) {  // predicate f(i) <= hi is monotone in i
      int mid = (lo_i + hi_i) / 2;
      if (f(mid) <= target_bler_hi) hi_i = mid;
      else lo_i = mid;
    }
  } else {
    hi_i = lo_i;
  }
  double v = f(hi_i);
  if (v < target_bler_lo)
    throw std::runtime_error("find_design_snr: estimate skips the target band");
  double db = grid_db(hi_i);
  return {db_to_linear(db), db};
}

}  // namespace polar
