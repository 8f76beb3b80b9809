#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ctfim/errors.hpp"
#include "ctfim/meanfield.hpp"

using namespace ctfim;

namespace {
int count(const std::vector<SaddleSolution>& s, SaddleClass c) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [c](const auto& x) { return x.class_tag == c; }));
}
const SaddleSolution& first(const std::vector<SaddleSolution>& s, SaddleClass c) {
  return *std::find_if(s.begin(), s.end(), [c](const auto& x) { return x.class_tag == c; });
}
}  // namespace

TEST_CASE("class A root saturates to sqrt(g^2 + 4 d^2)") {
  for (int d : {1, 2, 3}) {
    for (double g : {0.0, 0.7, 3.0}) {
      const auto s = solve_saddles(g, d, 50.0);
      REQUIRE(count(s, SaddleClass::A) == 1);
      CHECK(std::abs(first(s, SaddleClass::A).phi0 - std::sqrt(g * g + 4.0 * d * d)) < 1e-10);
      CHECK(first(s, SaddleClass::A).phi0 > g);
    }
  }
  CHECK(std::abs(first(solve_saddles(0.0, 1, 1000.0), SaddleClass::A).phi0 - 2.0) < 1e-12);
}

TEST_CASE("class A satisfies its self-consistency condition at finite T") {
  for (double T : {0.6, 1.0, 3.0}) {
    const auto saddles = solve_saddles(1.2, 1, T);
    const auto& a = first(saddles, SaddleClass::A);
    const double u = std::sqrt(a.phi0 * a.phi0 - 1.44);
    CHECK(std::abs(u / 2.0 - std::tanh(T * u)) < 1e-12);
  }
  CHECK(count(solve_saddles(1.0, 1, 0.4), SaddleClass::A) == 0);
}

TEST_CASE("class B always present") {
  for (double g : {0.0, 1.0, 5.0}) {
    const auto s = solve_saddles(g, 2, 7.0);
    CHECK(count(s, SaddleClass::B) == 1);
    CHECK(first(s, SaddleClass::B).phi0 == 0.0);
  }
}

TEST_CASE("class C roots fill (0, g) and interlace the tangent poles") {
  const double g = 3.0, T = 50.0;
  const int d = 1;
  const auto s = solve_saddles(g, d, T);
  const int n = count(s, SaddleClass::C);
  CHECK(std::abs(n - T * g / pi) <= 2.0);
  for (const auto& c : s) {
    if (c.class_tag != SaddleClass::C) continue;
    CHECK(c.phi0 > 0.0);
    CHECK(c.phi0 < g);
    const double w = std::sqrt(g * g - c.phi0 * c.phi0);
    CHECK(std::abs(w / (2.0 * d) - std::tan(T * w)) < 1e-8 * (1.0 + w));
    const double branch = T * w / pi;
    CHECK(branch - std::floor(branch) < 0.5);
  }
  const auto longer = solve_saddles(g, d, 2 * T);
  CHECK(count(longer, SaddleClass::C) > 1.8 * n);
}

TEST_CASE("saddle actions") {
  SaddleSolution a;
  a.class_tag = SaddleClass::A;
  CHECK(saddle_action(a, 0.0, 1, 10.0, 1.0).real() == doctest::Approx(-10.0));
  CHECK(saddle_action(a, 2.0, 1, 10.0, 3.0) == cplx(0.0, 0.0));
  CHECK(saddle_action(a, 4.0, 2, 10.0, 3.0) == cplx(0.0, 0.0));
  SaddleSolution b;
  CHECK(std::abs(saddle_action(b, 1.0, 1, pi / 3, 5.0)) < 1e-14);
  const cplx neg = saddle_action(b, 1.0, 1, 2.5, 1.0);  // cos 2.5 < 0
  CHECK(neg.imag() == doctest::Approx(-pi));
  CHECK_THROWS_AS(saddle_action(b, 1.0, 1, pi / 2, 1.0), NumericalFailure);
}

TEST_CASE("class C actions grow without bound at late times") {
  // Follow the lowest branch (smallest w, largest phi0), reported last.
  double prev = -1e300;
  for (double T : {20.0, 200.0, 2000.0}) {
    const auto s = solve_saddles(2.0, 1, T);
    const auto it = std::find_if(s.rbegin(), s.rend(), [](const auto& x) { return x.class_tag == SaddleClass::C; });
    REQUIRE(it != s.rend());
    CHECK(it->action_per_site.real() > prev);
    prev = it->action_per_site.real();
  }
  CHECK(prev > 100.0);
}

TEST_CASE("stability report") {
  SaddleSolution a;
  a.class_tag = SaddleClass::A;
  const auto ra = stability_report(a, 1.0, 1);
  CHECK(ra.q_massive);
  CHECK(*ra.gap == doctest::Approx(0.5));
  CHECK_FALSE(ra.instability_frequency.has_value());
  SaddleSolution b;
  CHECK(std::abs(*stability_report(b, pi, 1).instability_frequency - 1.0) < 1e-12);
  SaddleSolution c;
  c.class_tag = SaddleClass::C;
  c.phi0 = 2.0 - 1e-12;
  CHECK(*stability_report(c, 2.0, 1).instability_frequency < 1e-5);
}

TEST_CASE("dominant saddle") {
  CHECK(dominant_saddle(1.0, 1, 100.0).solution.class_tag == SaddleClass::A);
  // cos gT = 1 with g = 3 > 2d.
  CHECK(dominant_saddle(3.0, 1, 2.0 * pi / 3.0 * 10.0).solution.class_tag == SaddleClass::B);
}

TEST_CASE("dominant saddle crossover sits at g = 2d") {
  const double T = 1000.0;
  for (int d : {1, 2, 3}) {
    double crossover = -1.0;
    for (double g = 2.0 * d - 0.05; g <= 2.0 * d + 0.05; g += 0.001) {
      if (dominant_saddle(g, d, T).solution.class_tag != SaddleClass::A) {
        crossover = g;
        break;
      }
    }
    CHECK(std::abs(crossover - 2.0 * d) < 0.01);
  }
}
