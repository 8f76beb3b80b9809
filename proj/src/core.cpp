#include "ctfim/core.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ctfim/errors.hpp"

namespace ctfim {

std::string_view to_string(Sector s) { return s == Sector::apbc ? "APBC" : "PBC"; }

Sector other(Sector s) { return s == Sector::apbc ? Sector::pbc : Sector::apbc; }

double ModelParams::g() const {
  if (!(p > 0.0)) throw InvalidParameter("field strength needs p > 0");
  return theta / p;
}

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p) || p < 0.0) throw InvalidParameter("p must be finite and >= 0");
  if (!finite(theta) || theta < 0.0) throw InvalidParameter("theta must be finite and >= 0");
  if (L < 2) throw InvalidParameter("L must be at least 2, got " + std::to_string(L));
  if (!finite(T) || T < 0.0) throw InvalidParameter("T must be finite and >= 0");
  if (!finite(dt) || dt <= 0.0) throw InvalidParameter("dt must be > 0");
  if (d < 1) throw InvalidParameter("d must be >= 1");
}

ModelParams ModelParams::at_field(double g, double p, int L, double T) {
  ModelParams m;
  m.p = p;
  m.theta = g * p;
  m.L = L;
  m.T = T;
  return m;
}

Momentum::Momentum(long numerator, long denominator) {
  if (denominator <= 0) throw InvalidParameter("momentum denominator must be positive");
  const long d = std::gcd(numerator, denominator);
  num_ = numerator / d;
  den_ = denominator / d;
}

double Momentum::radians() const { return pi * static_cast<double>(num_) / static_cast<double>(den_); }

Momentum Momentum::reflected() const { return Momentum(den_ - num_, den_); }

std::strong_ordering operator<=>(const Momentum& a, const Momentum& b) {
  return a.num_ * b.den_ <=> b.num_ * a.den_;
}

int MomentumGrid::mode_count() const {
  return 2 * static_cast<int>(momenta.size()) + (has_zero ? 1 : 0) + (has_pi ? 1 : 0);
}

MomentumGrid build_grid(int L, Sector sector) {
  if (L < 2) throw InvalidParameter("grid needs L >= 2, got " + std::to_string(L));
  MomentumGrid grid;
  grid.sector = sector;
  grid.L = L;
  // k = pi * m / L with m odd (APBC) or even (PBC); paired modes have 0 < m < L.
  const int first = sector == Sector::apbc ? 1 : 2;
  for (int m = first; m < L; m += 2) grid.momenta.emplace_back(m, L);
  grid.has_zero = sector == Sector::pbc;
  grid.has_pi = (L % 2 == 1) == (sector == Sector::apbc);
  grid.has_half_pi = L % 2 == 0 && half_pi_sector(L) == sector;
  return grid;
}

Sector half_pi_sector(int L) {
  if (L % 2 != 0) throw InvalidParameter("pi/2 is a lattice momentum only for even L");
  return (L / 2) % 2 == 0 ? Sector::pbc : Sector::apbc;
}

cplx principal_sqrt(cplx z) { return std::sqrt(z); }

}  // namespace ctfim
