#include "ctfim/asymptotics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "ctfim/analysis.hpp"
#include "ctfim/errors.hpp"
#include "ctfim/observable.hpp"
#include "ctfim/spectrum.hpp"

namespace ctfim {

namespace {

// Adaptive Gauss-Kronrod over (0, pi) with extra breakpoints hugging pi/2,
// where the integrands sharpen as g -> 1.
template <class F>
double integrate_over_zone(F f, double g) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> cuts{0.0};
  const double w = std::abs(g - 1.0);
  for (double s : {1e4, 1e3, 1e2, 10.0, 1.0}) {
    const double off = s * w;
    if (off > 1e-14 && off < pi / 2 - 1e-3) cuts.push_back(pi / 2 - off);
  }
  cuts.push_back(pi / 2);
  const std::size_t mirrored = cuts.size() - 1;
  for (std::size_t i = mirrored; i-- > 1;) cuts.push_back(pi - cuts[i]);
  cuts.push_back(pi);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 12, 1e-12);
  }
  return total;
}

// d^2 (Re eps+) / dg^2 = -2 sin^2 k Re z^{-3/2} with z = 1 - g^2 - 2ig cos k.
double curvature_term(double g, double k) {
  const cplx z(1.0 - g * g, -2.0 * g * std::cos(k));
  const double s = std::sin(k);
  return 2.0 * s * s * (1.0 / (z * principal_sqrt(z))).real();
}

}  // namespace

double decay_rate(double g, double p, int L, Sector sector) {
  const auto grid = build_grid(L, sector);
  double sum = 0.0;
  for (const auto& m : grid.momenta) sum += 2.0 - quasiparticle_energy(g, m.radians()).real();
  return p / L * sum;
}

Sector leading_sector(int L) { return L % 2 == 0 ? other(half_pi_sector(L)) : Sector::apbc; }

double decay_rate_limit(double g, double p) {
  auto f = [g](double k) { return 2.0 - quasiparticle_energy(g, k).real(); };
  return p / (2.0 * pi) * integrate_over_zone(f, g);
}

double signed_frequency_odd(double g, double theta, int L) {
  if (L % 2 == 0) throw InvalidParameter("frequency_odd needs odd L");
  if (g < 0.0) throw InvalidParameter("frequency_odd needs g >= 0");
  const auto grid = build_grid(L, Sector::apbc);
  double sum = 0.0;
  for (const auto& m : grid.momenta) {
    const double k = m.radians();
    // Im eps / g -> -2 cos k as g -> 0.
    sum += g < 1e-8 ? -2.0 * std::cos(k) : quasiparticle_energy(g, k).imag() / g;
  }
  return theta * (1.0 + sum);
}

double frequency_odd(double g, double theta, int L) { return std::abs(signed_frequency_odd(g, theta, L)); }

double frequency_odd_limit(double g, double theta) { return g > 1.0 ? theta * std::sqrt(1.0 - 1.0 / (g * g)) : 0.0; }

double frequency_even(double g, double theta) { return 2.0 * frequency_odd_limit(g, theta); }

double phase_offset_odd(double g, int L) {
  if (L % 2 == 0) throw InvalidParameter("phase offset is defined for odd L");
  const auto grid = build_grid(L, Sector::apbc);
  double phi = 0.0;
  for (const auto& m : grid.momenta) {
    const double k = m.radians();
    const cplx eps = quasiparticle_energy(g, k);
    phi += std::arg(1.0 + (2.0 - 2.0 * cplx(0.0, g) * std::cos(k)) / eps);
  }
  return wrap_phase(phi);
}

LateTimeCharacter late_time_character(double g, double p, int L) {
  LateTimeCharacter out;
  const double theta = g * p;
  out.gamma = decay_rate(g, p, L, leading_sector(L));
  if (L % 2 == 0) {
    out.gamma_prime = decay_rate(g, p, L, half_pi_sector(L));
    out.omega = frequency_even(g, theta);
  } else {
    // cos(w T + phi) is even under (w, phi) -> (-w, -phi); report w >= 0.
    const double w = signed_frequency_odd(g, theta, L);
    const double phi = phase_offset_odd(g, L);
    out.omega = std::abs(w);
    out.phi = w < 0.0 ? wrap_phase(-phi) : phi;
  }
  return out;
}

double gamma_curvature_termwise(double g, double p, int L, Sector sector) {
  const auto grid = build_grid(L, sector);
  double sum = 0.0;
  for (const auto& m : grid.momenta) sum += curvature_term(g, m.radians());
  return p / L * sum;
}

double gamma_curvature(double g, double p, std::optional<int> L) {
  if (!L) {
    if (g == 1.0) throw ExceptionalPointError("curvature diverges at g = 1");
    auto f = [g](double k) { return curvature_term(g, k); };
    return p / (2.0 * pi) * integrate_over_zone(f, g);
  }
  const int size = *L;
  const Sector sector = leading_sector(size);
  const double h = std::max(1e-5, 1e-3 * std::abs(g - 1.0));
  return finite_difference([&](double x) { return decay_rate(x, p, size, sector); }, g, 2, h);
}

std::vector<ScalingCurve> scaling_dataset(ScalingQuantity quantity, const std::vector<double>& g_window,
                                          const std::vector<int>& sizes, double p) {
  if (sizes.empty() || g_window.empty()) throw InvalidParameter("scaling dataset needs sizes and a g window");
  const int parity = sizes.front() % 2;
  if (std::any_of(sizes.begin(), sizes.end(), [parity](int L) { return L % 2 != parity; }))
    throw InvalidParameter("scaling dataset mixes even and odd L");
  if (quantity == ScalingQuantity::frequency && parity == 0)
    throw InvalidParameter("finite-L frequency scaling is defined for odd L");
  std::vector<ScalingCurve> curves;
  for (int L : sizes) {
    ScalingCurve c{L, g_window, {}};
    c.y.reserve(g_window.size());
    for (double g : g_window) {
      c.y.push_back(quantity == ScalingQuantity::frequency
                        ? frequency_odd(g, 1.0, L)
                        : gamma_curvature_termwise(g, p, L, leading_sector(L)));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace ctfim
