#pragma once

#include <Eigen/Dense>
#include <optional>

#include "ctfim/core.hpp"

namespace ctfim {

inline constexpr double kExceptionalTolerance = 1e-12;

struct ComplexSpectrumPoint {
  double k = 0.0;
  cplx eps_plus;                    // upper quasiparticle energy, Re >= 0
  std::optional<cplx> alpha_plus;   // absent at the exceptional point
  std::optional<cplx> alpha_minus;
  bool is_exceptional = false;

  [[nodiscard]] cplx eps_minus() const { return -eps_plus; }
};

// 2 * sqrt(1 - g^2 - 2 i g cos k) on the principal branch.
cplx quasiparticle_energy(double g, double k);

bool is_exceptional(double g, double k);

ComplexSpectrumPoint dispersion(double g, double k);
ComplexSpectrumPoint dispersion(double g, const Momentum& k);

using Mat2 = Eigen::Matrix2cd;

// 2x2 block 2[(ig - cos k) sz + sin k sy] acting on the (k, -k) Nambu pair.
Mat2 block_hamiltonian(double g, double k);

// Columns of `forward` are right eigenvectors of the block for eps+ and eps-.
struct BogoliubovTransform {
  Mat2 forward;
  Mat2 inverse;
};

// Throws ExceptionalPointError at g = 1, k = pi/2.
BogoliubovTransform bogoliubov_transform(double g, double k);

// Unpaired-mode energies with the occupations of the g = 0 GHZ state
// (k = 0 filled, k = pi empty). A value is present iff the grid has that mode.
struct ZeroModeEnergies {
  std::optional<cplx> e0;
  std::optional<cplx> epi;

  [[nodiscard]] cplx total() const;
};

ZeroModeEnergies zero_mode_energies(double g, const MomentumGrid& grid);

struct ConjugatePairReport {
  bool holds = true;
  double max_deviation = 0.0;
  int pairs_checked = 0;
};

// Checks eps+(pi - k) = conj eps+(k) over the grid, skipping an exceptional pi/2.
ConjugatePairReport conjugate_pair_check(double g, const MomentumGrid& grid, double tolerance = 1e-12);

// inf over k in (0, pi) of Re eps+; closed form.
double real_gap(double g);

// Same quantity by brute-force minimisation over `samples` interior momenta.
double real_gap_scan(double g, int samples = 20001);

}  // namespace ctfim
