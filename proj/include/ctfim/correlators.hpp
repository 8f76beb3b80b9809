#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ctfim/core.hpp"

namespace ctfim {

using CMatrix = Eigen::MatrixXcd;

// Which bra pairs with the right ground state: its Hermitian conjugate, or the
// left eigenvector of the non-Hermitian Hamiltonian.
enum class InnerProduct { hermitian, biorthogonal };

// Ground-state fermion two-point functions of one boundary-condition sector,
// tabulated for separations -L..L.
class TwoPointTable {
 public:
  TwoPointTable(double g, int L, Sector sector, InnerProduct product = InnerProduct::hermitian);

  [[nodiscard]] int L() const { return L_; }
  [[nodiscard]] Sector sector() const { return sector_; }

  [[nodiscard]] cplx cc(int r) const { return cc_[at(r)]; }      // <c_{j+r} c_j>
  [[nodiscard]] cplx cdcd(int r) const { return cdcd_[at(r)]; }  // <c+_{j+r} c+_j>
  [[nodiscard]] cplx cdc(int r) const { return cdc_[at(r)]; }    // <c+_{j+r} c_j>
  [[nodiscard]] cplx ccd(int r) const { return ccd_[at(r)]; }    // <c_{j+r} c+_j>

  // <(c+ + a c)_l (c+ + b c)_m> for signs a, b = +-1.
  [[nodiscard]] cplx majorana(int a, int l, int b, int m) const;

 private:
  [[nodiscard]] std::size_t at(int r) const;

  int L_;
  Sector sector_;
  std::vector<cplx> cc_, cdcd_, cdc_, ccd_;
};

struct ElementaryCorrelators {
  cplx F;  // <c_r c_0>
  cplx G;  // <c_r c+_0>
};

ElementaryCorrelators elementary_FG(double g, int L, Sector sector, int r,
                                    InnerProduct product = InnerProduct::hermitian);

// Sector of the ground state with the lowest real energy; APBC for odd L,
// where the two sectors form a degenerate conjugate pair.
Sector ground_sector(double g, int L);

// Real part of the many-body ground energy of a sector, up to a sector-independent constant.
double ground_energy_real(double g, int L, Sector sector);

// Pfaffian by skew-symmetric Gaussian elimination with pivoting.
cplx pfaffian(CMatrix a);

// 2r x 2r antisymmetric contraction matrix in block form
// [[S, M], [-M^T, Q]] over the string B_i..B_{j-1}, A_{i+1}..A_j.
struct WickMatrix {
  CMatrix K;
  int r = 0;

  [[nodiscard]] CMatrix S() const { return K.topLeftCorner(r, r); }
  [[nodiscard]] CMatrix M() const { return K.topRightCorner(r, r); }
  [[nodiscard]] CMatrix Q() const { return K.bottomRightCorner(r, r); }
  // (-1)^{r(r-1)/2}, the sign of the reordering from the interleaved string.
  [[nodiscard]] int block_sign() const { return (r * (r - 1) / 2) % 2 ? -1 : 1; }
};

WickMatrix wick_matrix(const TwoPointTable& table, int i, int j);

struct CorrelatorOptions {
  std::optional<Sector> sector;          // default: ground_sector
  bool average_conjugate_pair = false;   // odd L: mean over both sectors
};

// <sigma^z_i sigma^z_j> in the ground state, normalised by the Hermitian norm.
cplx spin_correlator(double g, int L, int i, int j, const CorrelatorOptions& options = {});

// Left/right ground-state matrix element det M, normalised by <0_L|0_R> = 1.
// In the sector holding pi/2 with g > 1 both modes at pi/2 have the same real energy;
// the principal-branch one is taken, as in the Pfaffian route.
cplx bicorrelator(double g, int L, int i, int j, std::optional<Sector> sector = std::nullopt);

// Same quantity through the biorthogonal Pfaffian; a cross-check for bicorrelator.
cplx bicorrelator_pfaffian(double g, int L, int i, int j, std::optional<Sector> sector = std::nullopt);

struct MagnetizationEstimate {
  double value = 0.0;
  double imaginary_residue = 0.0;
  bool negative_argument = false;  // value forced to 0
};

MagnetizationEstimate magnetization_estimate(double g, int L, bool use_bicorrelator = false);

enum class FitKind { exponential_plus_constant, power_law };

struct CorrelatorFit {
  FitKind kind = FitKind::power_law;
  double amplitude = 0.0;             // A
  std::optional<double> xi;           // exponential fits
  std::optional<double> constant;     // exponential fits
  std::optional<double> exponent;     // power-law fits
  double residual = 0.0;              // sum of squared residuals
};

// y ~ A exp(-x / xi) + C, linear in (A, C) for each xi; xi by 1-d minimisation.
CorrelatorFit fit_exponential_plus_constant(const std::vector<double>& x, const std::vector<double>& y);

// y ~ A / x^alpha by least squares on log-log data.
CorrelatorFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ctfim
