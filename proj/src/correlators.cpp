#include "ctfim/correlators.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "ctfim/errors.hpp"
#include "ctfim/spectrum.hpp"

namespace ctfim {

namespace {

constexpr cplx I{0.0, 1.0};

// Ground-state data of one (k, -k) pair: occupation <n_k>, anomalous
// X = <c+_k c+_-k> and Y = <c_k c_-k>.
struct PairData {
  double k;
  cplx n, X, Y;
};

// In the basis {|0>, c+_k c+_-k |0>} the pair block is
// [[0, 2i sin k], [-2i sin k, 4(ig - cos k)]]; its ground eigenvalue is 2(ig - cos k) - eps.
PairData pair_data(double g, double k, InnerProduct product) {
  const double s = std::sin(k);
  const cplx lambda = 2.0 * (I * g - std::cos(k)) - quasiparticle_energy(g, k);
  const cplx u = 2.0 * I * s;  // right eigenvector (u, v)
  const cplx v = lambda;
  if (product == InnerProduct::hermitian) {
    const double norm = std::norm(u) + std::norm(v);
    return {k, std::norm(v) / norm, std::conj(v) * u / norm, -std::conj(u) * v / norm};
  }
  const cplx w0 = -2.0 * I * s;  // left eigenvector (w0, w1)
  const cplx w1 = lambda;
  const cplx overlap = w0 * u + w1 * v;
  return {k, w1 * v / overlap, w1 * u / overlap, -w0 * v / overlap};
}

void check_sites(int L, int i, int j) {
  if (!(0 <= i && i < j && j < L)) throw InvalidParameter("correlators need 0 <= i < j < L");
}

}  // namespace

TwoPointTable::TwoPointTable(double g, int L, Sector sector, InnerProduct product) : L_(L), sector_(sector) {
  const auto grid = build_grid(L, sector);
  for (const auto& m : grid.momenta)
    if (is_exceptional(g, m.radians())) throw ExceptionalPointError("ground state is not diagonalisable at g = 1");
  std::vector<PairData> pairs;
  for (const auto& m : grid.momenta) pairs.push_back(pair_data(g, m.radians(), product));
  // Unpaired modes: k = 0 filled, k = pi empty.
  struct Unpaired {
    double k, n;
  };
  std::vector<Unpaired> single;
  if (grid.has_zero) single.push_back({0.0, 1.0});
  if (grid.has_pi) single.push_back({pi, 0.0});

  const std::size_t size = 2 * static_cast<std::size_t>(L) + 1;
  cc_.resize(size), cdcd_.resize(size), cdc_.resize(size), ccd_.resize(size);
  const double inv = 1.0 / L;
  for (int r = -L; r <= L; ++r) {
    cplx cc = 0.0, cdcd = 0.0, cdc = 0.0, ccd = 0.0;
    for (const auto& p : pairs) {
      const double c = std::cos(p.k * r), s = std::sin(p.k * r);
      cc += 2.0 * I * s * p.Y;
      cdcd += -2.0 * I * s * p.X;
      cdc += 2.0 * c * p.n;
      ccd += 2.0 * c * (1.0 - p.n);
    }
    for (const auto& u : single) {
      cdc += std::polar(1.0, -u.k * r) * u.n;
      ccd += std::polar(1.0, u.k * r) * (1.0 - u.n);
    }
    const std::size_t idx = at(r);
    cc_[idx] = cc * inv, cdcd_[idx] = cdcd * inv, cdc_[idx] = cdc * inv, ccd_[idx] = ccd * inv;
  }
}

std::size_t TwoPointTable::at(int r) const {
  if (r < -L_ || r > L_) throw InvalidParameter("separation out of tabulated range");
  return static_cast<std::size_t>(r + L_);
}

cplx TwoPointTable::majorana(int a, int l, int b, int m) const {
  const int r = l - m;
  return cdcd(r) + double(b) * cdc(r) + double(a) * ccd(r) + double(a * b) * cc(r);
}

ElementaryCorrelators elementary_FG(double g, int L, Sector sector, int r, InnerProduct product) {
  const TwoPointTable t(g, L, sector, product);
  return {t.cc(r), t.ccd(r)};
}

double ground_energy_real(double g, int L, Sector sector) {
  const auto grid = build_grid(L, sector);
  double e = 0.0;
  for (const auto& m : grid.momenta) {
    const double k = m.radians();
    e += -2.0 * std::cos(k) - quasiparticle_energy(g, k).real();
  }
  if (grid.has_zero) e -= 2.0;  // filled k = 0 mode, 2(ig - 1)
  return e;
}

Sector ground_sector(double g, int L) {
  if (L % 2 == 1) return Sector::apbc;
  return ground_energy_real(g, L, Sector::apbc) <= ground_energy_real(g, L, Sector::pbc) ? Sector::apbc
                                                                                          : Sector::pbc;
}

cplx pfaffian(CMatrix a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw InvalidParameter("pfaffian needs a square matrix");
  if (n % 2 != 0) throw InvalidParameter("pfaffian needs an even dimension");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidParameter("pfaffian needs an antisymmetric matrix");
  cplx result = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index pivot;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&pivot);
    pivot += k + 1;
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      result = -result;
    }
    if (a(k + 1, k) == cplx(0.0)) return 0.0;
    result *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      const Eigen::VectorXcd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const Eigen::VectorXcd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return result;
}

WickMatrix wick_matrix(const TwoPointTable& table, int i, int j) {
  check_sites(table.L(), i, j);
  const int r = j - i;
  // B_l = c+ - c on l = i..j-1, then A_l = c+ + c on l = i+1..j.
  std::vector<std::pair<int, int>> ops;
  for (int l = i; l < j; ++l) ops.emplace_back(-1, l);
  for (int l = i + 1; l <= j; ++l) ops.emplace_back(+1, l);
  WickMatrix w{CMatrix::Zero(2 * r, 2 * r), r};
  for (int a = 0; a < 2 * r; ++a) {
    for (int b = a + 1; b < 2 * r; ++b) {
      w.K(a, b) = table.majorana(ops[a].first, ops[a].second, ops[b].first, ops[b].second);
      w.K(b, a) = -w.K(a, b);
    }
  }
  return w;
}

namespace {

cplx correlator_in(double g, int L, int i, int j, Sector sector, InnerProduct product) {
  const TwoPointTable table(g, L, sector, product);
  const WickMatrix w = wick_matrix(table, i, j);
  return double(w.block_sign()) * pfaffian(w.K);
}

}  // namespace

cplx spin_correlator(double g, int L, int i, int j, const CorrelatorOptions& options) {
  check_sites(L, i, j);
  if (options.average_conjugate_pair && L % 2 == 1) {
    return 0.5 * (correlator_in(g, L, i, j, Sector::apbc, InnerProduct::hermitian) +
                  correlator_in(g, L, i, j, Sector::pbc, InnerProduct::hermitian));
  }
  return correlator_in(g, L, i, j, options.sector.value_or(ground_sector(g, L)), InnerProduct::hermitian);
}

cplx bicorrelator(double g, int L, int i, int j, std::optional<Sector> sector) {
  check_sites(L, i, j);
  const auto grid = build_grid(L, sector.value_or(ground_sector(g, L)));
  for (const auto& m : grid.momenta)
    if (is_exceptional(g, m.radians())) throw ExceptionalPointError("ground state is not diagonalisable at g = 1");
  // Whole Brillouin zone of the sector: k = pi m / L, m of the sector's parity, 0 <= m < 2L.
  // eps depends on cos k only; evaluating it at the image in [0, pi] keeps pi/2 and 3pi/2
  // on the same side of the branch cut.
  std::vector<double> ks;
  std::vector<cplx> inv_eps;
  for (int m = grid.sector == Sector::apbc ? 1 : 0; m < 2 * L; m += 2) {
    ks.push_back(pi * m / L);
    inv_eps.push_back(1.0 / quasiparticle_energy(g, pi * std::min(m, 2 * L - m) / L));
  }
  const int r = j - i;
  // Entries depend on a - b only; tabulate offsets -r..r-2.
  std::vector<cplx> entry(2 * r);
  for (int off = -r; off <= r - 2; ++off) {
    cplx acc = 0.0;
    for (std::size_t n = 0; n < ks.size(); ++n)
      acc += (std::cos(ks[n] * (off + 1)) - I * g * std::cos(ks[n] * off)) * inv_eps[n];
    entry[off + r] = 2.0 / L * acc;
  }
  CMatrix m(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) m(a, b) = entry[(a - b - 1) + r];
  return m.determinant();
}

cplx bicorrelator_pfaffian(double g, int L, int i, int j, std::optional<Sector> sector) {
  check_sites(L, i, j);
  return correlator_in(g, L, i, j, sector.value_or(ground_sector(g, L)), InnerProduct::biorthogonal);
}

MagnetizationEstimate magnetization_estimate(double g, int L, bool use_bicorrelator) {
  if (L % 2 != 0) throw InvalidParameter("magnetization estimate needs even L");
  const cplx c = use_bicorrelator ? bicorrelator(g, L, 0, L / 2) : spin_correlator(g, L, 0, L / 2);
  MagnetizationEstimate m;
  m.imaginary_residue = c.imag();
  if (c.real() < 0.0) {
    m.negative_argument = true;
    return m;
  }
  m.value = std::sqrt(c.real());
  return m;
}

namespace {

struct LinearFit {
  double amplitude, constant, residual;
};

LinearFit fit_with_xi(const std::vector<double>& x, const std::vector<double>& y, double xi) {
  Eigen::MatrixXd design(x.size(), 2);
  Eigen::VectorXd rhs(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    design(n, 0) = std::exp(-x[n] / xi);
    design(n, 1) = 1.0;
    rhs(n) = y[n];
  }
  const Eigen::Vector2d c = design.colPivHouseholderQr().solve(rhs);
  return {c(0), c(1), (design * c - rhs).squaredNorm()};
}

void check_fit_input(const std::vector<double>& x, const std::vector<double>& y, std::size_t minimum) {
  if (x.size() != y.size()) throw InvalidParameter("fit inputs differ in length");
  if (x.size() < minimum) throw InvalidParameter("too few points to fit");
}

}  // namespace

CorrelatorFit fit_exponential_plus_constant(const std::vector<double>& x, const std::vector<double>& y) {
  check_fit_input(x, y, 4);
  const double lo = std::log(0.05), hi = std::log(1e4);
  const int samples = 400;
  auto residual = [&](double log_xi) { return fit_with_xi(x, y, std::exp(log_xi)).residual; };
  int best = 0;
  double best_res = residual(lo);
  for (int n = 1; n <= samples; ++n) {
    const double r = residual(lo + (hi - lo) * n / samples);
    if (r < best_res) best_res = r, best = n;
  }
  const double step = (hi - lo) / samples;
  const double a = lo + step * std::max(0, best - 1), b = lo + step * std::min(samples, best + 1);
  const auto [log_xi, res] = boost::math::tools::brent_find_minima(residual, a, b, 50);
  const double xi = std::exp(log_xi);
  const auto lin = fit_with_xi(x, y, xi);
  CorrelatorFit fit;
  fit.kind = FitKind::exponential_plus_constant;
  fit.amplitude = lin.amplitude;
  fit.xi = xi;
  fit.constant = lin.constant;
  fit.residual = res;
  return fit;
}

CorrelatorFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  check_fit_input(x, y, 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidParameter("power-law fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  CorrelatorFit fit;
  fit.kind = FitKind::power_law;
  fit.exponent = -slope;
  fit.amplitude = std::exp(intercept);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::log(y[i]) - (intercept + slope * std::log(x[i]));
    fit.residual += r * r;
  }
  return fit;
}

}  // namespace ctfim
