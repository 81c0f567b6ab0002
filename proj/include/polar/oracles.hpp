#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "polar/codec.hpp"
#include "polar/ga_kernel.hpp"

namespace polar::oracle {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n
class GaussLegendre {
 public:
  explicit GaussLegendre(int n) : x_(n), w_(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double xi = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double pn = 0.0, pn1 = 0.0;
      for (int it = 0; it < 100; ++it) {
        legendre(n, xi, pn, pn1);
        double dp = n * (xi * pn - pn1) / (xi * xi - 1.0);
        double dx = pn / dp;
        xi -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      legendre(n, xi, pn, pn1);
      double dp = n * (xi * pn - pn1) / (xi * xi - 1.0);
      x_[i] = -xi;
      x_[n - 1 - i] = xi;
      w_[i] = w_[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
  }

  template <class F>
  double segment(F&& f, double a, double b) const {
    double c = 0.5 * (a + b), h = 0.5 * (b - a), acc = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) acc += w_[i] * f(c + h * x_[i]);
    return acc * h;
  }

  template <class F>
  double over(F&& f, const std::vector<double>& bounds) const {
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s)
      acc += segment(f, bounds[s], bounds[s + 1]);
    return acc;
  }

 private:
  static void legendre(int n, double x, double& pn, double& pn1) {
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
    }
    pn = p0;
    pn1 = p1;
  }

  std::vector<double> x_, w_;
};

inline const GaussLegendre& gl64() {
  static const GaussLegendre g(64);
  return g;
}

inline std::vector<double> linear_bounds(double a, double b, int m) {
  std::vector<double> v(m + 1);
  for (int k = 0; k <= m; ++k) v[k] = a + (b - a) * double(k) / m;
  return v;
}

// quadratic clustering toward a: resolves narrow features at the origin
inline std::vector<double> quadratic_bounds(double a, double b, int m) {
  std::vector<double> v(m + 1);
  for (int k = 0; k <= m; ++k) {
    double t = double(k) / m;
    v[k] = a + (b - a) * t * t;
  }
  return v;
}

struct QuadratureSpec {
  int segments = 80;           // over the +-half_width standardized range
  double half_width = 40.0;    // in standard deviations
  const char* scheme = "gauss-legendre-64-composite";
};

// E[tanh(x/2)] under N(gamma, 2*gamma), standardized substitution
inline double psi_numeric(double gamma, const QuadratureSpec& q = {}) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::domain_error("psi_numeric: gamma must be positive");
  const double s = std::sqrt(2.0 * gamma);
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto f = [&](double t) {
    return std::tanh(0.5 * (gamma + s * t)) * norm * std::exp(-0.5 * t * t);
  };
  return gl64().over(f, linear_bounds(-q.half_width, q.half_width, q.segments));
}

// log(1 - psi(gamma)) via the shifted integral
//   log phi = -g/4 - log(pi g)/2 + log Int_0^inf sech(x/2) exp(-x^2/(4g)) dx,
// stable over the full range (the direct 1 - psi cancels catastrophically)
inline double log_phi_numeric(double gamma, int segments = 100) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::domain_error("log_phi_numeric: gamma must be positive");
  const double hi = std::min(40.0 * std::sqrt(2.0 * gamma), 1500.0);
  auto f = [&](double x) {
    double e = std::exp(-0.5 * x);                      // sech(x/2) = 2e^{-x/2}/(1+e^{-x})
    double sech_half = 2.0 * e / (1.0 + e * e);
    return sech_half * std::exp(-x * x / (4.0 * gamma));
  };
  double I = gl64().over(f, quadratic_bounds(0.0, hi, segments));
  return -0.25 * gamma - 0.5 * std::log(std::numbers::pi * gamma) + std::log(I);
}

// 1F1(a; b; x) for nonpositive integer a: exact finite polynomial
inline double kummer_1f1_poly(int a, double b, double x) {
  if (a > 0)
    throw std::invalid_argument("kummer_1f1_poly: requires a nonpositive integer a");
  double s = 1.0, term = 1.0;
  const int m = -a;
  for (int j = 1; j <= m; ++j) {
    term *= double(a + j - 1) / (b + j - 1) * x / j;
    s += term;
  }
  return s;
}

struct SeriesTruncation {
  int kmax = 3;
};

// tanh-series expansion of psi around 0: sum over k of
// (2^{2k}-1) B_{2k} / k! * gamma^k * 1F1(1-k; 3/2; -gamma/4)
inline double psi_series_small(double gamma, const SeriesTruncation& trunc = {}) {
  static constexpr double kB2k[] = {0.0,
                                    1.0 / 6.0,
                                    -1.0 / 30.0,
                                    1.0 / 42.0,
                                    -1.0 / 30.0,
                                    5.0 / 66.0,
                                    -691.0 / 2730.0,
                                    7.0 / 6.0};
  if (!(gamma > 0.0)) throw std::domain_error("psi_series_small: gamma must be positive");
  if (trunc.kmax < 1 || trunc.kmax > 7)
    throw std::invalid_argument("psi_series_small: kmax must be in [1, 7]");
  if (gamma > 0.5)
    std::cerr << "psi_series_small: gamma " << gamma
              << " outside validated radius (0, 0.5]\n";
  double s = 0.0, fact = 1.0, pow2 = 1.0, gk = 1.0;
  for (int k = 1; k <= trunc.kmax; ++k) {
    fact *= k;
    pow2 *= 4.0;
    gk *= gamma;
    double coef = (pow2 - 1.0) * kB2k[k] / fact;
    s += coef * gk * kummer_1f1_poly(1 - k, 1.5, -gamma / 4.0);
  }
  return s;
}

// log of the asymptotic expansion sqrt(pi/g) e^{-g/4} (1 - pi^2/(4g)
// + 5 pi^4/(32 g^2) - 61 pi^6/(384 g^3)), truncated after the g^-3 term
inline double phi_series_large(double gamma) {
  if (!(gamma >= ga::kGamma2))
    throw std::domain_error("phi_series_large: gamma must be >= 10");
  const double pi = std::numbers::pi;
  double inner = 1.0 - pi * pi / (4.0 * gamma) +
                 5.0 * std::pow(pi, 4) / (32.0 * gamma * gamma) -
                 61.0 * std::pow(pi, 6) / (384.0 * gamma * gamma * gamma);
  return -0.25 * gamma + 0.5 * std::log(pi / gamma) + std::log(inner);
}

// Hurwitz zeta by partial sum plus Euler-Maclaurin tail
inline double hurwitz_zeta(double m, double q) {
  if (!(m >= 2.0) || !(q > 0.0))
    throw std::domain_error("hurwitz_zeta: need m >= 2, q > 0");
  const int L = 200;
  double s = 0.0;
  for (int l = 0; l < L; ++l) s += std::pow(q + l, -m);
  const double a = q + L;
  s += std::pow(a, 1.0 - m) / (m - 1.0);
  s += 0.5 * std::pow(a, -m);
  s += m / 12.0 * std::pow(a, -m - 1.0);
  s -= m * (m + 1.0) * (m + 2.0) / 720.0 * std::pow(a, -m - 3.0);
  return s;
}

namespace detail {

// Appendix-style single integral for E[La [+] Lb], La,Lb iid N(g, 2g);
// direct z-domain form, preferred for large g
inline double exact_mean_z_form(double g, int scale) {
  const double hi = g + 40.0 * std::sqrt(2.0 * g) + 40.0;
  const double norm = 1.0 / std::sqrt(std::numbers::pi * g);
  auto f = [&](double z) {
    double emz = std::exp(-z);
    double t1 = z * std::exp(-(z - g) * (z - g) / (4.0 * g)) * (-std::expm1(-z)) *
                (ga::q_func((z - g) / std::sqrt(2.0 * g)) -
                 ga::q_func((z + g) / std::sqrt(2.0 * g)));
    double t2 = std::log1p(emz) / std::numbers::sqrt2 *
                (std::exp(-z * z / (8.0 * g)) -
                 0.5 * std::exp(-(z - 2.0 * g) * (z - 2.0 * g) / (8.0 * g)) * (1.0 + emz));
    return (t1 - t2) * norm;
  };
  std::vector<double> pts{0.0, std::min(std::sqrt(g), hi), std::min(g, hi),
                          std::min(2.0 * g, hi), hi};
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    int m = std::max(8, int(64.0 * (pts[s + 1] - pts[s]) / hi) + 1);
    acc += gl64().over(f, linear_bounds(pts[s], pts[s + 1], m * scale));
  }
  return acc;
}

// substituted x = z / sqrt(g) form, preferred for small g
inline double exact_mean_x_form(double g, int scale) {
  const double r = std::sqrt(g);
  const double hi = r + 60.0;
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  auto f = [&](double x) {
    double emrx = std::exp(-r * x);
    double t1 = r * x * std::exp(-(x - r) * (x - r) / 4.0) * (-std::expm1(-r * x)) *
                (ga::q_func((x - r) / std::numbers::sqrt2) -
                 ga::q_func((x + r) / std::numbers::sqrt2));
    double t2 = std::log1p(emrx) / std::numbers::sqrt2 *
                (std::exp(-x * x / 8.0) -
                 0.5 * std::exp(-(x - 2.0 * r) * (x - 2.0 * r) / 8.0) * (1.0 + emrx));
    return (t1 - t2) * norm;
  };
  std::vector<double> pts{0.0, r, 2.0 * r, hi};
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double acc = 0.0;
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    int m = std::max(8, int(64.0 * (pts[s + 1] - pts[s]) / hi) + 1);
    acc += gl64().over(f, linear_bounds(pts[s], pts[s + 1], m * scale));
  }
  return acc;
}

}  // namespace detail

// mean check-node output LLR without the Gaussian output assumption;
// z-form for gamma >= 4, x-substituted form below
inline double exact_mean_boxplus(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::domain_error("exact_mean_boxplus: gamma must be positive");
  auto eval = [&](int scale) {
    return gamma >= 4.0 ? detail::exact_mean_z_form(gamma, scale)
                        : detail::exact_mean_x_form(gamma, scale);
  };
  double coarse = eval(1), fine = eval(2);
  if (std::abs(fine - coarse) > std::max(1e-10, 1e-9 * std::abs(fine)))
    throw std::runtime_error("exact_mean_boxplus: quadrature did not converge");
  return fine;
}

struct McMean {
  double mean;
  double std_error;
};

inline McMean mc_mean_boxplus(double gamma, std::uint64_t trials, std::uint64_t seed) {
  if (gamma < 0.0 || std::isnan(gamma))
    throw std::domain_error("mc_mean_boxplus: gamma must be >= 0");
  if (trials < 10000)
    throw std::invalid_argument("mc_mean_boxplus: need at least 1e4 trials");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(gamma, std::sqrt(2.0 * gamma));
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    double la = dist(rng), lb = dist(rng);
    double v = boxplus(la, lb);
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / trials;
  double var = (sumsq - sum * sum / trials) / (double(trials) - 1.0);
  return {mean, std::sqrt(std::max(var, 0.0) / trials)};
}

}  // namespace polar::oracle
