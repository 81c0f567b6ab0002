#include <catch2/catch_amalgamated.hpp>

#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "polar/ga_kernel.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace polar;

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i)
    g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
  return g;
}

}  // namespace

TEST_CASE("q_func matches erfc form and known values", "[ga_kernel]") {
  REQUIRE(ga::q_func(0.0) == 0.5);
  REQUIRE_THAT(ga::q_func(2.0), WithinRel(0.022750131948179212, 1e-13));
  REQUIRE_THAT(ga::q_func(std::numbers::sqrt2), WithinRel(0.078649603525142533, 1e-13));
  REQUIRE(ga::q_func(37.0) > 0.0);       // far tail stays positive while erfc is normal
  REQUIRE(ga::q_func(40.0) >= 0.0);      // beyond erfc underflow it may reach exact zero
  REQUIRE(ga::q_func(-3.0) > 0.99);
}

TEST_CASE("q_inv round trip over the full tail", "[ga_kernel]") {
  REQUIRE(ga::q_inv(0.5) == 0.0);
  REQUIRE_THAT(ga::q_inv(1e-6), WithinAbs(4.753424308822899, 1e-9));
  for (double p : {0.499, 0.4, 0.1, 1e-2, 1e-3, 1e-6, 1e-12, 1e-30, 1e-100, 1e-250}) {
    double x = ga::q_inv(p);
    CAPTURE(p, x);
    REQUIRE_THAT(ga::q_func(x), WithinRel(p, 1e-12));
  }
  REQUIRE_THAT(ga::q_inv(ga::q_func(2.0)), WithinAbs(2.0, 1e-9));
  REQUIRE_THROWS_AS(ga::q_inv(0.0), std::domain_error);
  REQUIRE_THROWS_AS(ga::q_inv(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(ga::q_inv(0.5000001), std::domain_error);
  REQUIRE_THROWS_AS(ga::q_inv(std::nan("")), std::domain_error);
}

TEST_CASE("xi_hat piecewise branches hit frozen values", "[ga_kernel]") {
  // cubic branch
  REQUIRE_THAT(ga::xi_hat(0.1), WithinRel(-0.048875, 1e-13));
  REQUIRE_THAT(ga::xi_hat(0.2), WithinRel(-0.096, 1e-13));
  // quadratic branch
  REQUIRE_THAT(ga::xi_hat(0.5), WithinRel(-0.2282615, 1e-12));
  REQUIRE_THAT(ga::xi_hat(0.7), WithinRel(-0.3113157, 1e-12));
  // power branch
  REQUIRE_THAT(ga::xi_hat(2.0), WithinRel(-0.79986784322415738, 1e-12));
  REQUIRE_THAT(ga::xi_hat(4.0), WithinRel(-1.4695586140681214, 1e-12));
  // tail branch owns gamma = 10 exactly
  REQUIRE_THAT(ga::xi_hat(10.0), WithinRel(-3.2547107146988949, 1e-12));
  REQUIRE_THAT(ga::xi_hat(1000.0), WithinRel(-252.88397457159564, 1e-12));
  // golden far-tail value
  REQUIRE_THAT(std::exp(ga::xi_hat(1000.0)) / 1.49e-110, WithinAbs(1.0, 0.02));
}

TEST_CASE("xi_hat is strictly decreasing", "[ga_kernel]") {
  auto grid = log_grid(1e-6, 1e6, 600);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CAPTURE(grid[i - 1], grid[i]);
    REQUIRE(ga::xi_hat(grid[i]) < ga::xi_hat(grid[i - 1]));
  }
}

TEST_CASE("xi_hat branch seams are small", "[ga_kernel]") {
  auto cubic = [](double g) { return -g / 2 + g * g / 8 - g * g * g / 8; };
  auto quad = [](double g) { return ga::kA0 + ga::kA1 * g + ga::kA2 * g * g; };
  auto power = [](double g) { return ga::kChungA * std::pow(g, ga::kChungC) + ga::kChungB; };
  double gap0 = std::abs(cubic(ga::kGamma0) - quad(ga::kGamma0));
  double gap1 = std::abs(quad(ga::kGamma1) - power(ga::kGamma1));
  double gap2 = std::abs(power(ga::kGamma2) - ga::xi_tail(ga::kGamma2));
  CAPTURE(gap0, gap1, gap2);
  REQUIRE(gap0 <= 5e-3);
  REQUIRE(gap1 <= 5e-3);
  REQUIRE(gap0 <= 1e-4);  // recorded ~2e-7
  REQUIRE(gap1 <= 1e-4);  // recorded ~4.4e-7
  REQUIRE_THAT(gap2, WithinRel(3.010877e-3, 1e-4));  // the one visible seam
}

TEST_CASE("xi_hat rejects bad input", "[ga_kernel]") {
  REQUIRE_THROWS_AS(ga::xi_hat(0.0), std::domain_error);
  REQUIRE_THROWS_AS(ga::xi_hat(-1.0), std::domain_error);
  REQUIRE_THROWS_AS(ga::xi_hat(std::numeric_limits<double>::infinity()), std::domain_error);
  REQUIRE_THROWS_AS(ga::xi_hat(std::nan("")), std::domain_error);
}

TEST_CASE("z thresholds are the branch images", "[ga_kernel]") {
  const auto& z = ga::z_thresholds();
  REQUIRE(z.z0 == ga::xi_hat(ga::kGamma0));
  REQUIRE(z.z1 == ga::xi_hat(ga::kGamma1));
  REQUIRE(z.z2 == ga::xi_hat(ga::kGamma2));
  REQUIRE(z.z0 > z.z1);
  REQUIRE(z.z1 > z.z2);
  REQUIRE_THAT(z.z2, WithinRel(-3.2547107146988949, 1e-12));
}

TEST_CASE("xi_hat_inv round trip", "[ga_kernel]") {
  for (double g : log_grid(ga::kGamma0, 1e5, 300)) {
    CAPTURE(g);
    double back = ga::xi_hat_inv(ga::xi_hat(g));
    REQUIRE_THAT(back, WithinRel(g, 1e-3));
    REQUIRE_THAT(back, WithinRel(g, 5e-6));  // recorded worst 2.2e-6
  }
  for (int i = 1; i <= 200; ++i) {  // series branch below Gamma0
    double g = ga::kGamma0 * i / 201.0;
    CAPTURE(g);
    REQUIRE_THAT(ga::xi_hat_inv(ga::xi_hat(g)), WithinRel(g, 1e-2));
    REQUIRE_THAT(ga::xi_hat_inv(ga::xi_hat(g)), WithinRel(g, 2e-3));  // recorded 1.64e-3
  }
  // z0 belongs to the quadratic branch, whose root sits a seam gap away from 0.2
  REQUIRE_THAT(ga::xi_hat_inv(ga::z_thresholds().z0), WithinRel(ga::kGamma0, 1e-5));
}

TEST_CASE("xi_hat_inv deep tail solves the tail equation", "[ga_kernel]") {
  double g = ga::xi_hat_inv(-300.0);
  REQUIRE(g > 1187.5);
  REQUIRE(g < 1189.0);
  REQUIRE_THAT(g, WithinRel(1188.1209119761184, 1e-10));
  REQUIRE_THAT(ga::xi_tail(g), WithinAbs(-300.0, 1e-9));
}

TEST_CASE("xi_hat_inv rejects bad input", "[ga_kernel]") {
  REQUIRE_THROWS_AS(ga::xi_hat_inv(0.0), std::domain_error);
  REQUIRE_THROWS_AS(ga::xi_hat_inv(0.5), std::domain_error);
  REQUIRE_THROWS_AS(ga::xi_hat_inv(std::nan("")), std::domain_error);
}

TEST_CASE("improved check transform frozen anchors", "[ga_kernel]") {
  auto imp = [](double g) { return ga::check_node_transform(g, GaVariant::ImprovedLogDomain); };
  // quartic small-signal branch is closed form
  REQUIRE_THAT(imp(1e-3), WithinRel(4.9950066666666662e-07, 1e-13));
  REQUIRE_THAT(imp(0.2), WithinRel(0.017066666666666671, 1e-13));
  // generic branch
  REQUIRE_THAT(imp(0.2000001), WithinRel(0.016898557306621494, 1e-10));
  REQUIRE_THAT(imp(0.5), WithinRel(0.086817809134455678, 1e-10));
  REQUIRE_THAT(imp(2.0), WithinRel(0.82336423232911327, 1e-10));
  REQUIRE_THAT(imp(4.0), WithinRel(2.2820732220991355, 1e-10));
  REQUIRE_THAT(imp(8.0), WithinRel(5.7854580456599258, 1e-9));
  REQUIRE_THAT(imp(10.0), WithinRel(7.6436428683804163, 1e-9));
  REQUIRE_THAT(imp(20.0), WithinRel(17.453886018763868, 1e-9));
  REQUIRE_THAT(imp(32.0), WithinRel(29.375782325698502, 1e-9));
  REQUIRE_THAT(imp(50.0), WithinRel(47.327255725186873, 1e-9));
  REQUIRE_THAT(imp(100.0), WithinRel(97.279937003664713, 1e-9));
  REQUIRE_THAT(imp(500.0), WithinRel(497.23837973851317, 1e-9));
  REQUIRE_THAT(imp(4.0), WithinAbs(2.283, 1e-3));
  REQUIRE_THAT(imp(100.0), WithinAbs(97.227, 0.1));
}

TEST_CASE("conventional check transform frozen anchors", "[ga_kernel]") {
  auto conv = [](double g) { return ga::check_node_transform(g, GaVariant::ConventionalChung); };
  REQUIRE_THAT(conv(1e-3), WithinRel(0.030070517188578449, 1e-9));
  REQUIRE_THAT(conv(0.01), WithinRel(0.029665437158046259, 1e-9));
  REQUIRE_THAT(conv(0.05), WithinRel(0.029636607398240145, 1e-9));
  REQUIRE_THAT(conv(1.0), WithinRel(0.28226912987101116, 1e-9));
  REQUIRE_THAT(conv(4.0), WithinRel(2.2820732220986883, 1e-9));
  REQUIRE_THAT(conv(100.0), WithinRel(97.28092513174488, 1e-9));
  // float64 saturation: phi underflows past ~2966, the bisection pins the edge
  REQUIRE_THAT(conv(2960.0), WithinRel(2956.5770307404455, 1e-9));
  REQUIRE_THAT(conv(2970.0), WithinRel(2966.7969275906216, 1e-9));
  REQUIRE(conv(2970.0) == conv(5000.0));
  REQUIRE(conv(5000.0) < 5000.0);
}

TEST_CASE("ha check transform frozen anchors", "[ga_kernel]") {
  auto ha = [](double g) { return ga::check_node_transform(g, GaVariant::HaModified); };
  REQUIRE_THAT(ha(1e-3), WithinRel(4.8525163252955751e-07, 1e-9));
  REQUIRE_THAT(ha(0.05), WithinRel(0.0011718720253822701, 1e-9));
  REQUIRE_THAT(ha(1.0), WithinRel(0.27822247873565686, 1e-9));
  REQUIRE_THAT(ha(4.0), WithinRel(2.2820732220986883, 1e-9));
  // phi saturates to 1 in float64: target t = 1 means a dead bit channel
  REQUIRE(ha(1e-200) == 0.0);
}

TEST_CASE("check transforms are contractive and ordered", "[ga_kernel]") {
  for (double g : log_grid(1e-6, 1e5, 300)) {
    CAPTURE(g);
    double i = ga::check_node_transform(g, GaVariant::ImprovedLogDomain);
    double h = ga::check_node_transform(g, GaVariant::HaModified);
    REQUIRE(i < g);
    REQUIRE(h < g);
    REQUIRE(i <= ga::variable_node_transform(g));
    REQUIRE(h <= ga::variable_node_transform(g));
  }
  // conventional model is only sane away from its small-gamma blowup
  for (double g : log_grid(0.05, 1e5, 200)) {
    CAPTURE(g);
    REQUIRE(ga::check_node_transform(g, GaVariant::ConventionalChung) < g);
  }
  for (double g : {2960.0, 2970.0, 5000.0})
    REQUIRE(ga::check_node_transform(g, GaVariant::ConventionalChung) < g);
}

TEST_CASE("small-gamma law gamma^2/2 and the conventional blowup", "[ga_kernel]") {
  double g = 1e-3;
  double i = ga::check_node_transform(g, GaVariant::ImprovedLogDomain) / (g * g);
  double h = ga::check_node_transform(g, GaVariant::HaModified) / (g * g);
  REQUIRE_THAT(i, WithinAbs(0.5, 6e-4));
  REQUIRE_THAT(h, WithinAbs(0.5, 0.02));
  // conventional result stalls near 0.03 instead of vanishing quadratically
  double c = ga::check_node_transform(g, GaVariant::ConventionalChung);
  REQUIRE(c > 0.01);
}

TEST_CASE("check transform rejects bad input and maps 0 to 0", "[ga_kernel]") {
  for (auto v : {GaVariant::ImprovedLogDomain, GaVariant::ConventionalChung,
                 GaVariant::HaModified}) {
    REQUIRE(ga::check_node_transform(0.0, v) == 0.0);
    REQUIRE_THROWS_AS(ga::check_node_transform(-1.0, v), std::domain_error);
    REQUIRE_THROWS_AS(ga::check_node_transform(std::nan(""), v), std::domain_error);
  }
}

TEST_CASE("variable node transform doubles the mean", "[ga_kernel]") {
  REQUIRE(ga::variable_node_transform(0.0) == 0.0);
  REQUIRE(ga::variable_node_transform(5.0) == 10.0);
  REQUIRE(ga::variable_node_transform(1e308) == DBL_MAX);
  REQUIRE_THROWS_AS(ga::variable_node_transform(-1.0), std::domain_error);
  REQUIRE_THROWS_AS(ga::variable_node_transform(std::nan("")), std::domain_error);
}
