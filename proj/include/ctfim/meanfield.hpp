#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ctfim/core.hpp"

namespace ctfim {

enum class SaddleClass { A, B, C };

std::string_view to_string(SaddleClass c);

struct StabilityReport {
  bool q_massive = true;
  std::optional<double> instability_frequency;
  std::optional<double> gap;
};

struct SaddleSolution {
  SaddleClass class_tag = SaddleClass::B;
  double phi0 = 0.0;
  cplx action_per_site;  // S / N
  StabilityReport stability;
};

// Class A when T > 1/(2d), class B, then every class C root in increasing phi0.
std::vector<SaddleSolution> solve_saddles(double g, int d, double T);

// Saddle action for N sites. Class B throws NumericalFailure at cos gT = 0.
cplx saddle_action(const SaddleSolution& solution, double g, int d, double T, double N);

StabilityReport stability_report(const SaddleSolution& solution, double g, int d);

struct DominantSaddle {
  SaddleSolution solution;
  std::vector<SaddleClass> tied_with;  // other saddles whose Re S agrees within tolerance
};

// Saddle with the smallest Re S per site; ties are listed, not broken silently.
DominantSaddle dominant_saddle(double g, int d, double T, double tie_tolerance = 1e-12);

}  // namespace ctfim
