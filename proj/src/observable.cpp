#include "ctfim/observable.hpp"

#include <cmath>

#include "ctfim/errors.hpp"
#include "ctfim/spectrum.hpp"

namespace ctfim {

namespace {

constexpr double kSeriesRadius = 0.1;
constexpr double kAsymptoticRe = 30.0;

}  // namespace

double wrap_phase(double phase) {
  double r = std::remainder(phase, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

cplx LogPolar::value() const { return std::polar(std::exp(log_magnitude), phase); }

LogPolar& LogPolar::operator*=(const LogPolar& other) {
  log_magnitude += other.log_magnitude;
  phase = wrap_phase(phase + other.phase);
  return *this;
}

LogPolar LogPolar::from(cplx z) { return {std::log(std::abs(z)), std::arg(z)}; }

cplx cosh_plus_sinhc(cplx x, cplx a) {
  if (std::abs(x) < kSeriesRadius) {
    const cplx x2 = x * x;
    const cplx cosh_s = 1.0 + x2 / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0 * (1.0 + x2 / 56.0)));
    const cplx sinhc_s = 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0)));
    return cosh_s + a * sinhc_s;
  }
  return std::cosh(x) + a * std::sinh(x) / x;
}

namespace {

// log of cosh(x) + a sinh(x)/x without overflow when Re x is large.
LogPolar log_cosh_plus_sinhc(cplx x, cplx a) {
  if (x.real() > kAsymptoticRe) {
    const cplx c = a / x;
    const cplx rest = 0.5 * ((1.0 + c) + (1.0 - c) * std::exp(-2.0 * x));
    const LogPolar tail = LogPolar::from(rest);
    return {x.real() + tail.log_magnitude, wrap_phase(x.imag() + tail.phase)};
  }
  return LogPolar::from(cosh_plus_sinhc(x, a));
}

}  // namespace

ModeFactor mode_factor(const ModelParams& params, double k) {
  const double g = params.g();
  if (is_exceptional(g, k)) throw ExceptionalPointError("use exceptional_mode_factor at g = 1, k = pi/2");
  if (!(k > 0.0 && k < pi)) throw InvalidParameter("mode_factor needs k in (0, pi)");
  const double pT = params.pT();
  // f = [cosh x + (2 - 2ig cos k) pT sinh(x)/x] e^{-2pT}, x = pT eps; even in x.
  const cplx x = pT * quasiparticle_energy(g, k);
  const cplx a = (2.0 - 2.0 * cplx(0.0, g) * std::cos(k)) * pT;
  LogPolar f = log_cosh_plus_sinhc(x, a);
  return {k, f.log_magnitude - 2.0 * pT, f.phase};
}

ModeFactor mode_factor(const ModelParams& params, const Momentum& k) { return mode_factor(params, k.radians()); }

ModeFactor exceptional_mode_factor(const ModelParams& params) {
  if (params.g() != 1.0) throw InvalidParameter("exceptional_mode_factor requires g = 1");
  const double pT = params.pT();
  // Jordan block: exp(-pT h) is linear in pT.
  return {pi / 2, std::log1p(2.0 * pT) - 2.0 * pT, 0.0};
}

StringExpectation string_expectation(const ModelParams& params) {
  params.validate();
  const double g = params.g();
  const double pT = params.pT();
  StringExpectation out;
  cplx total = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto grid = build_grid(params.L, i == 0 ? Sector::apbc : Sector::pbc);
    LogPolar acc{0.0, wrap_phase(-pT * zero_mode_energies(g, grid).total().imag())};
    for (const auto& m : grid.momenta) {
      const ModeFactor f = is_exceptional(g, m.radians()) ? exceptional_mode_factor(params) : mode_factor(params, m);
      acc *= LogPolar{f.log_magnitude, f.phase};
    }
    out.sectors[i] = {grid.sector, acc};
    total += 0.5 * acc.value();
  }
  out.value = total.real();
  out.imaginary_residue = total.imag();
  return out;
}

double qubit0d_observable(const ModelParams& params) {
  const double g = params.g();
  const double pT = params.pT();
  if (pT < 0.0) throw InvalidParameter("qubit0d_observable needs T >= 0");
  // exp(-pT H) = cosh(pT s) - pT sinhc(pT s) H with s^2 = 1 - g^2 and <0|H|0> = -1.
  const cplx x = pT * std::sqrt(cplx(1.0 - g * g));
  return (cosh_plus_sinhc(x, pT) * std::exp(-pT)).real();
}

Rates qubit0d_rates(double g, double p) {
  if (g < 0.0 || !(p > 0.0)) throw InvalidParameter("qubit0d_rates needs g >= 0 and p > 0");
  if (g == 1.0) throw ExceptionalPointError("single qubit decay is not exponential at g = 1");
  if (g < 1.0) return {p - p * std::sqrt(1.0 - g * g), 0.0};
  return {p, p * std::sqrt(g * g - 1.0)};
}

}  // namespace ctfim
