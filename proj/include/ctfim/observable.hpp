#pragma once

#include <array>
#include <utility>

#include "ctfim/core.hpp"

namespace ctfim {

// A complex number stored as log|z| and arg z; magnitudes far below the
// double range stay representable.
struct LogPolar {
  double log_magnitude = 0.0;
  double phase = 0.0;  // reduced to (-pi, pi]

  [[nodiscard]] cplx value() const;
  LogPolar& operator*=(const LogPolar& other);
  static LogPolar from(cplx z);
};

double wrap_phase(double phase);

struct ModeFactor {
  double k = 0.0;
  double log_magnitude = 0.0;
  double phase = 0.0;

  [[nodiscard]] cplx value() const { return LogPolar{log_magnitude, phase}.value(); }
};

// cosh(x) + a * sinh(x) / x, accurate for small |x| as well.
cplx cosh_plus_sinhc(cplx x, cplx a);

// Mode factor of the string observable at momentum k, normalised by its
// g = 0 value. Throws ExceptionalPointError at g = 1, k = pi/2.
ModeFactor mode_factor(const ModelParams& params, double k);
ModeFactor mode_factor(const ModelParams& params, const Momentum& k);

// The k = pi/2 factor at g = 1 where the mode is a Jordan block.
ModeFactor exceptional_mode_factor(const ModelParams& params);

struct SectorContribution {
  Sector sector = Sector::apbc;
  LogPolar product;  // zero-mode phase times the product over paired momenta
};

struct StringExpectation {
  double value = 0.0;
  double imaginary_residue = 0.0;
  std::array<SectorContribution, 2> sectors{};
};

// Normalised <prod_j sigma^z_j>(T) from the |0...0> state.
StringExpectation string_expectation(const ModelParams& params);

// Single qubit benchmark: <0|exp(-pT H)|0> / <0|exp(-pT H(0))|0> with H = -tau^z + i g tau^x.
double qubit0d_observable(const ModelParams& params);

struct Rates {
  double gamma = 0.0;
  double omega = 0.0;
};

// Late-time decay rate and frequency of the single qubit. Throws at g = 1.
Rates qubit0d_rates(double g, double p);

}  // namespace ctfim
