#pragma once

#include <optional>
#include <vector>

#include "ctfim/core.hpp"

namespace ctfim {

struct LateTimeCharacter {
  double gamma = 0.0;                       // leading decay rate per site
  std::optional<double> gamma_prime;        // subleading rate, even L only
  double omega = 0.0;
  std::optional<double> phi;                // phase offset, odd L only
};

// (p/L) sum over the sector's paired momenta of (2 - Re eps+).
double decay_rate(double g, double p, int L, Sector sector);

// Sector carrying the leading decay rate: the one without pi/2 for even L.
Sector leading_sector(int L);

// L -> infinity limit (p / 2pi) int_0^pi (2 - Re eps+) dk.
double decay_rate_limit(double g, double p);

// Odd-L oscillation frequency theta (1 + (1/g) sum_APBC Im eps+). The sign of
// the sum alternates with L mod 4 above g = 1; frequency_odd returns its magnitude.
double signed_frequency_odd(double g, double theta, int L);
double frequency_odd(double g, double theta, int L);

// L odd, L -> infinity: theta sqrt(1 - 1/g^2) above g = 1, zero below.
double frequency_odd_limit(double g, double theta);

// Even-L frequency 2 theta sqrt(1 - 1/g^2), zero for g <= 1.
double frequency_even(double g, double theta);

// Constant phase offset of the odd-L late-time oscillation.
double phase_offset_odd(double g, int L);

LateTimeCharacter late_time_character(double g, double p, int L);

// Second g-derivative of the leading decay rate. L = nullopt selects the
// thermodynamic limit evaluated by quadrature.
double gamma_curvature(double g, double p, std::optional<int> L);

// Finite-L curvature summed term by term from d^2 eps / dg^2.
double gamma_curvature_termwise(double g, double p, int L, Sector sector);

enum class ScalingQuantity { frequency, curvature };

struct ScalingCurve {
  int L = 0;
  std::vector<double> g;
  std::vector<double> y;
};

// Per-L curves over a g window, ready for collapse. Frequencies are in units
// of theta; curvatures use the dissipation rate p.
// Throws InvalidParameter when the L list mixes parities.
std::vector<ScalingCurve> scaling_dataset(ScalingQuantity quantity, const std::vector<double>& g_window,
                                          const std::vector<int>& sizes, double p = 1.0);

}  // namespace ctfim
