#include "ctfim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctfim/errors.hpp"

namespace ctfim {

namespace {
constexpr cplx I{0.0, 1.0};
}

cplx quasiparticle_energy(double g, double k) {
  return 2.0 * principal_sqrt(cplx(1.0 - g * g, -2.0 * g * std::cos(k)));
}

bool is_exceptional(double g, double k) {
  return std::abs(g - 1.0) < kExceptionalTolerance && std::abs(k - pi / 2) < kExceptionalTolerance;
}

ComplexSpectrumPoint dispersion(double g, double k) {
  if (!(k > 0.0 && k < pi)) throw InvalidParameter("dispersion needs k in (0, pi)");
  ComplexSpectrumPoint pt;
  pt.k = k;
  pt.eps_plus = quasiparticle_energy(g, k);
  pt.is_exceptional = is_exceptional(g, k);
  if (!pt.is_exceptional) {
    const double s = std::sin(k);
    const cplx base = 2.0 * g + 2.0 * I * std::cos(k);
    pt.alpha_plus = (base + I * pt.eps_plus) / (2.0 * s);
    pt.alpha_minus = (base - I * pt.eps_plus) / (2.0 * s);
  }
  return pt;
}

ComplexSpectrumPoint dispersion(double g, const Momentum& k) { return dispersion(g, k.radians()); }

Mat2 block_hamiltonian(double g, double k) {
  const cplx a = I * g - std::cos(k);
  const double s = std::sin(k);
  Mat2 h;
  h << 2.0 * a, -2.0 * I * s, 2.0 * I * s, -2.0 * a;
  return h;
}

BogoliubovTransform bogoliubov_transform(double g, double k) {
  const auto pt = dispersion(g, k);
  if (pt.is_exceptional) throw ExceptionalPointError("no Bogoliubov transform at g = 1, k = pi/2");
  const cplx ap = *pt.alpha_plus;
  const cplx am = *pt.alpha_minus;
  const cplx scale = std::sqrt(cplx(std::sin(k))) / std::sqrt(pt.eps_plus);
  BogoliubovTransform t;
  t.forward << 1.0, I, ap, I * am;
  t.forward *= scale;
  t.inverse << I * am, -I, -ap, 1.0;
  t.inverse *= scale;
  return t;
}

cplx ZeroModeEnergies::total() const { return e0.value_or(0.0) + epi.value_or(0.0); }

ZeroModeEnergies zero_mode_energies(double g, const MomentumGrid& grid) {
  ZeroModeEnergies z;
  if (grid.has_zero) z.e0 = cplx(-1.0, g);   // (ig - 1)(2n - 1), n = 1
  if (grid.has_pi) z.epi = cplx(-1.0, -g);   // (ig + 1)(2n - 1), n = 0
  return z;
}

ConjugatePairReport conjugate_pair_check(double g, const MomentumGrid& grid, double tolerance) {
  ConjugatePairReport report;
  for (const auto& m : grid.momenta) {
    const double k = m.radians();
    // pi/2 maps to itself and sits on the branch cut once g > 1.
    if (m.is_half_pi() || is_exceptional(g, k)) continue;
    const cplx lhs = quasiparticle_energy(g, m.reflected().radians());
    const cplx rhs = std::conj(quasiparticle_energy(g, k));
    report.max_deviation = std::max(report.max_deviation, std::abs(lhs - rhs));
    ++report.pairs_checked;
  }
  report.holds = report.max_deviation <= tolerance;
  return report;
}

double real_gap(double g) {
  if (g < 0.0) throw InvalidParameter("real_gap needs g >= 0");
  // |1 - g^2 - 2ig cos k| is smallest at cos k = 0, and so is Re sqrt.
  return g < 1.0 ? 2.0 * std::sqrt(1.0 - g * g) : 0.0;
}

double real_gap_scan(double g, int samples) {
  if (samples < 3) throw InvalidParameter("real_gap_scan needs at least 3 samples");
  double best = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= samples; ++i) {
    const double k = pi * i / (samples + 1);
    best = std::min(best, quasiparticle_energy(g, k).real());
  }
  return best;
}

}  // namespace ctfim
