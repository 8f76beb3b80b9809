#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctfim/analysis.hpp"
#include "ctfim/asymptotics.hpp"
#include "ctfim/errors.hpp"
#include "ctfim/observable.hpp"

using namespace ctfim;

TEST_CASE("decay rate vanishes at g = 0") {
  for (int L : {5, 8, 33}) CHECK(decay_rate(0.0, 1.0, L, Sector::apbc) == doctest::Approx(0.0));
}

TEST_CASE("odd L: both sectors give the same decay rate") {
  for (int L : {3, 7, 33, 101}) {
    for (double g : {0.2, 0.5, 1.0, 1.7, 3.0}) {
      CHECK(std::abs(decay_rate(g, 1.0, L, Sector::apbc) - decay_rate(g, 1.0, L, Sector::pbc)) < 1e-12);
    }
  }
}

TEST_CASE("even L: the half-pi sector decays faster") {
  const auto c = late_time_character(2.0, 1.0, 32);
  REQUIRE(c.gamma_prime.has_value());
  CHECK(c.gamma < *c.gamma_prime);
  for (int L : {4, 6, 10, 32}) {
    for (double g : {0.3, 0.9, 1.5, 4.0}) {
      const auto t = late_time_character(g, 1.0, L);
      CHECK(*t.gamma_prime >= t.gamma - 1e-14);
      CHECK(t.gamma >= 0.0);
      CHECK(t.omega >= 0.0);
    }
  }
}

TEST_CASE("decay rate converges to its thermodynamic limit") {
  for (double g : {0.5, 1.5}) {
    const double limit = decay_rate_limit(g, 1.0);
    CHECK(decay_rate(g, 1.0, 4001, Sector::apbc) == doctest::Approx(limit).epsilon(1e-5));
  }
}

TEST_CASE("odd-L frequency approaches its limit") {
  const double target = frequency_odd_limit(2.0, 1.0);
  CHECK(target == doctest::Approx(std::sqrt(3.0) / 2.0));
  double prev = 1e9;
  for (int L : {101, 401, 1601}) {
    const double err = std::abs(frequency_odd(2.0, 1.0, L) - target);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.01 * target);
  // L = 3 mod 4 flips the sign of the raw sum but not the frequency.
  CHECK(signed_frequency_odd(2.0, 1.0, 103) < 0.0);
  CHECK(frequency_odd(2.0, 1.0, 103) == doctest::Approx(target).epsilon(1e-3));
  for (int L : {101, 401, 1601}) CHECK(std::abs(frequency_odd(0.5, 1.0, L)) < 1e-10);
  CHECK(frequency_odd_limit(0.5, 1.0) == 0.0);
  CHECK_THROWS_AS(frequency_odd(2.0, 1.0, 100), InvalidParameter);
}

TEST_CASE("odd-L frequency is continuous at g = 0") {
  for (int L : {5, 11}) CHECK(frequency_odd(0.0, 1.0, L) == doctest::Approx(frequency_odd(1e-7, 1.0, L)).epsilon(1e-6));
}

TEST_CASE("even-L frequency law") {
  CHECK(frequency_even(0.9, 2.0) == 0.0);
  CHECK(frequency_even(1.0, 2.0) == 0.0);
  CHECK(frequency_even(2.0, 1.0) == doctest::Approx(std::sqrt(3.0)));
  for (double g : {1.2, 2.0, 5.0}) CHECK(0.5 * frequency_even(g, 1.3) == doctest::Approx(frequency_odd_limit(g, 1.3)));
  std::vector<double> x, y;
  for (double e : {1e-4, 1e-3, 1e-2}) {
    x.push_back(std::log(e));
    y.push_back(std::log(frequency_even(1.0 + e, 1.0)));
  }
  const double slope = (y[2] - y[0]) / (x[2] - x[0]);
  CHECK(slope == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("odd-L late-time form matches the exact observable") {
  const int L = 15;
  const double g = 2.0;
  const auto c = late_time_character(g, 1.0, L);
  REQUIRE(c.phi.has_value());
  // exact / [e^{-Gamma L T} cos(omega T + phi)] should settle to a constant amplitude.
  std::vector<double> amplitude;
  for (double T = 20.0; T < 30.0; T += 0.37) {
    const double wave = std::cos(c.omega * T + *c.phi);
    if (std::abs(wave) < 0.3) continue;
    const double exact = string_expectation(ModelParams::at_field(g, 1.0, L, T)).value;
    amplitude.push_back(exact / (std::exp(-c.gamma * L * T) * wave));
  }
  REQUIRE(amplitude.size() > 5);
  const auto [lo, hi] = std::minmax_element(amplitude.begin(), amplitude.end());
  CHECK(*lo > 0.0);
  CHECK((*hi - *lo) < 1e-3 * *hi);  // modes near pi/2 decay only like e^{-0.5 T}
}

TEST_CASE("finite-L curvature: finite difference agrees with term-by-term derivative") {
  for (int L : {7, 16, 33}) {
    for (double g : {0.0, 0.5, 1.4}) {
      CHECK(gamma_curvature(g, 1.0, L) ==
            doctest::Approx(gamma_curvature_termwise(g, 1.0, L, leading_sector(L))).epsilon(1e-6));
    }
  }
}

TEST_CASE("thermodynamic curvature: finite difference of the limiting rate") {
  const double g = 1.01;
  const double fd = finite_difference([](double x) { return decay_rate_limit(x, 1.0); }, g, 2, 1e-4);
  CHECK(fd == doctest::Approx(gamma_curvature(g, 1.0, std::nullopt)).epsilon(0.01));
}

TEST_CASE("thermodynamic curvature: divergence above, bounded below") {
  std::vector<double> lx, ly;
  for (double e : {1e-4, 1e-3, 1e-2}) {
    lx.push_back(std::log(e));
    ly.push_back(std::log(std::abs(gamma_curvature(1.0 + e, 1.0, std::nullopt))));
  }
  const double slope = (ly[2] - ly[0]) / (lx[2] - lx[0]);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.1));
  double lo = 1e9, hi = -1e9;
  for (double e : {1e-4, 1e-3, 1e-2}) {
    const double v = std::abs(gamma_curvature(1.0 - e, 1.0, std::nullopt));
    lo = std::min(lo, v), hi = std::max(hi, v);
  }
  CHECK(hi <= 2.0 * lo);
  CHECK_THROWS_AS(gamma_curvature(1.0, 1.0, std::nullopt), ExceptionalPointError);
}

TEST_CASE("scaling dataset shapes and parity guard") {
  const std::vector<double> window{0.99, 1.0, 1.01};
  const auto d = scaling_dataset(ScalingQuantity::frequency, window, {101, 201, 401});
  REQUIRE(d.size() == 3);
  CHECK(d[1].L == 201);
  CHECK(d[1].y.size() == window.size());
  CHECK_THROWS_AS(scaling_dataset(ScalingQuantity::curvature, window, {100, 201}), InvalidParameter);
  CHECK_THROWS_AS(scaling_dataset(ScalingQuantity::frequency, window, {100, 200, 400}), InvalidParameter);
  CHECK_NOTHROW(scaling_dataset(ScalingQuantity::curvature, window, {100, 200, 400}));
}
