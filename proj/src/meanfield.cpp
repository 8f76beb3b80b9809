#include "ctfim/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctfim/errors.hpp"

namespace ctfim {

namespace {

// Bisection on a bracket with f(lo) and f(hi) of opposite sign.
template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void check_inputs(double g, int d, double T) {
  if (!(g >= 0.0) || d < 1 || !(T > 0.0)) throw InvalidParameter("saddles need g >= 0, d >= 1, T > 0");
}

SaddleSolution make(SaddleClass c, double phi0, double g, int d, double T) {
  SaddleSolution s;
  s.class_tag = c;
  s.phi0 = phi0;
  s.action_per_site = saddle_action(s, g, d, T, 1.0);
  s.stability = stability_report(s, g, d);
  return s;
}

}  // namespace

std::string_view to_string(SaddleClass c) {
  switch (c) {
    case SaddleClass::A: return "A";
    case SaddleClass::B: return "B";
    case SaddleClass::C: return "C";
  }
  return "?";
}

std::vector<SaddleSolution> solve_saddles(double g, int d, double T) {
  check_inputs(g, d, T);
  const double two_d = 2.0 * d;
  std::vector<SaddleSolution> out;

  // Class A: u = sqrt(phi0^2 - g^2) solves u / 2d = tanh(T u) on (0, 2d].
  if (T * two_d > 1.0) {
    auto f = [&](double u) { return std::tanh(T * u) - u / two_d; };
    // f > 0 just above u = 0; start inside that region.
    double lo = std::min(two_d, 1e-3 / T);
    while (f(lo) <= 0.0 && lo > 1e-300) lo *= 0.5;
    const double u = bisect(f, lo, two_d);
    out.push_back(make(SaddleClass::A, std::hypot(g, u), g, d, T));
  }

  out.push_back(make(SaddleClass::B, 0.0, g, d, T));

  // Class C: w = sqrt(g^2 - phi0^2) in (0, g) solves w / 2d = tan(T w), one root per
  // branch T w in (n pi, (n + 1/2) pi) where tan is positive.
  std::vector<SaddleSolution> class_c;
  if (g > 0.0) {
    auto f = [&](double w) { return std::tan(T * w) - w / two_d; };
    const double margin = 1e-13;
    for (long n = 0; n * pi / T < g; ++n) {
      const double branch_end = (n + 0.5) * pi / T;
      const double lo = n * pi / T + margin * (n == 0 ? branch_end : 1.0 + n * pi / T);
      const double hi = branch_end < g ? branch_end - margin * (1.0 + branch_end) : g * (1.0 - 1e-15);
      if (!(hi > lo)) continue;
      if ((f(lo) < 0.0) == (f(hi) < 0.0)) continue;
      const double w = bisect(f, lo, hi);
      const double phi0 = std::sqrt(std::max(0.0, g * g - w * w));
      if (phi0 > 0.0 && phi0 < g) class_c.push_back(make(SaddleClass::C, phi0, g, d, T));
    }
  }
  // Roots were found with w increasing; report phi0 increasing.
  out.insert(out.end(), class_c.rbegin(), class_c.rend());
  return out;
}

cplx saddle_action(const SaddleSolution& solution, double g, int d, double T, double N) {
  switch (solution.class_tag) {
    case SaddleClass::A: {
      const double r = g / (2.0 * d);
      return T * N * d * (r * r - 1.0);
    }
    case SaddleClass::B: {
      const double c = std::cos(g * T);
      if (std::abs(c) < 1e-14) throw NumericalFailure("class B action has a pole at cos gT = 0");
      return -N * std::log(cplx(2.0 * c, 0.0));
    }
    case SaddleClass::C: {
      const double phi2 = solution.phi0 * solution.phi0;
      const double four_d = 4.0 * d;
      return N * T * phi2 / four_d - N * std::log(four_d / std::sqrt(4.0 * d * d + g * g - phi2));
    }
  }
  throw InvalidParameter("unknown saddle class");
}

StabilityReport stability_report(const SaddleSolution& solution, double g, int d) {
  StabilityReport r;
  switch (solution.class_tag) {
    case SaddleClass::A: r.gap = (1.0 + g * g) / (4.0 * d); break;
    case SaddleClass::B: r.instability_frequency = g / pi; break;
    case SaddleClass::C:
      r.instability_frequency = std::sqrt(std::max(0.0, g * g - solution.phi0 * solution.phi0)) / pi;
      break;
  }
  return r;
}

DominantSaddle dominant_saddle(double g, int d, double T, double tie_tolerance) {
  const auto saddles = solve_saddles(g, d, T);
  std::size_t best = 0;
  for (std::size_t i = 1; i < saddles.size(); ++i)
    if (saddles[i].action_per_site.real() < saddles[best].action_per_site.real()) best = i;
  DominantSaddle out{saddles[best], {}};
  const double ref = saddles[best].action_per_site.real();
  for (std::size_t i = 0; i < saddles.size(); ++i) {
    if (i == best) continue;
    if (std::abs(saddles[i].action_per_site.real() - ref) <= tie_tolerance * std::max(1.0, std::abs(ref)))
      out.tied_with.push_back(saddles[i].class_tag);
  }
  return out;
}

}  // namespace ctfim
