#pragma once

#include <complex>
#include <compare>
#include <numbers>
#include <string_view>
#include <vector>

namespace ctfim {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Fermion boundary condition selected by the Ising parity sector.
enum class Sector { apbc, pbc };

std::string_view to_string(Sector s);
Sector other(Sector s);

struct ModelParams {
  double p = 1.0;      // dissipation rate
  double theta = 0.0;  // unitary rotation rate
  int L = 2;           // chain length
  double T = 0.0;      // evolution time
  double dt = 0.01;    // trotter step, oracle only
  int d = 1;           // lattice dimension, mean field only

  // Field strength theta / p. Throws InvalidParameter when p <= 0.
  [[nodiscard]] double g() const;
  [[nodiscard]] double pT() const { return p * T; }

  // Rejects non-finite or out-of-range fields.
  void validate() const;

  // Convenience: parameters at field g for dissipation rate p.
  static ModelParams at_field(double g, double p, int L, double T);
};

// A momentum k = pi * numerator / denominator kept as an exact reduced fraction.
class Momentum {
 public:
  Momentum(long numerator, long denominator);

  [[nodiscard]] long numerator() const { return num_; }
  [[nodiscard]] long denominator() const { return den_; }
  [[nodiscard]] double radians() const;
  [[nodiscard]] bool is_half_pi() const { return 2 * num_ == den_; }
  [[nodiscard]] Momentum reflected() const;  // pi - k

  friend bool operator==(const Momentum&, const Momentum&) = default;
  friend std::strong_ordering operator<=>(const Momentum& a, const Momentum& b);

 private:
  long num_;
  long den_;
};

struct MomentumGrid {
  Sector sector = Sector::apbc;
  int L = 0;
  std::vector<Momentum> momenta;  // strictly increasing, all in (0, pi)
  bool has_zero = false;          // unpaired k = 0 mode
  bool has_pi = false;            // unpaired k = pi mode
  bool has_half_pi = false;       // pi/2 is one of `momenta`

  // Fermion modes accounted for: two per paired momentum plus the unpaired ones.
  [[nodiscard]] int mode_count() const;
};

MomentumGrid build_grid(int L, Sector sector);

// Sector whose grid holds k = pi/2; L must be even.
Sector half_pi_sector(int L);

// Square root on the principal branch, Re >= 0.
cplx principal_sqrt(cplx z);

}  // namespace ctfim
