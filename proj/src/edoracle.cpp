#include "ctfim/edoracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "ctfim/errors.hpp"

namespace ctfim {

namespace {

constexpr cplx I{0.0, 1.0};

void check_size(int L) {
  if (L < 2 || L > kOracleMaxL)
    throw UnsupportedConfiguration("oracle supports 2 <= L <= " + std::to_string(kOracleMaxL));
}

// Bit b set iff sites b and b+1 (periodic) differ, i.e. Z_b Z_{b+1} = -1.
unsigned bond_mask(unsigned x, int L) {
  const unsigned rotated = ((x >> 1) | (x << (L - 1))) & ((1u << L) - 1u);
  return x ^ rotated;
}

// Number of bonds whose ZZ value differs between the forward and backward labels, keyed by f ^ b.
std::vector<int> bond_flip_counts(int L) {
  std::vector<int> counts(std::size_t{1} << L);
  for (unsigned x = 0; x < counts.size(); ++x) counts[x] = std::popcount(bond_mask(x, L));
  return counts;
}

Eigen::Matrix2cd pauli(char letter) {
  Eigen::Matrix2cd m;
  switch (letter) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -I, I, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw InvalidParameter(std::string("unknown Pauli letter '") + letter + "'");
  }
  return m;
}

double norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// Continuous-time generator: i (theta/2) sum_j [X_j, rho] + p sum_b (Z_b rho Z_b - rho).
void apply_generator(const std::vector<cplx>& in, std::vector<cplx>& out, int L, double theta, double p,
                     const std::vector<int>& flips) {
  const std::size_t dim = std::size_t{1} << L;
  const cplx rot = I * (theta / 2.0);
  for (std::size_t f = 0; f < dim; ++f) {
    for (std::size_t b = 0; b < dim; ++b) {
      const std::size_t idx = (f << L) | b;
      cplx acc = -2.0 * p * flips[f ^ b] * in[idx];
      cplx comm = 0.0;
      for (int j = 0; j < L; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        comm += in[((f ^ bit) << L) | b] - in[(f << L) | (b ^ bit)];
      }
      out[idx] = acc + rot * comm;
    }
  }
}

}  // namespace

DoubledState::DoubledState(int L) : L_(L) {
  check_size(L);
  amp_.assign(std::size_t{1} << (2 * L), cplx{});
  amp_[0] = 1.0;
}

DoubledState DoubledState::maximally_mixed(int L) {
  DoubledState s(L);
  s.amp_[0] = 0.0;
  const double w = 1.0 / static_cast<double>(s.dim());
  for (std::size_t f = 0; f < s.dim(); ++f) s(f, f) = w;
  return s;
}

cplx DoubledState::trace() const {
  cplx t = 0.0;
  for (std::size_t f = 0; f < dim(); ++f) t += (*this)(f, f);
  return t;
}

double DoubledState::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t f = 0; f < dim(); ++f)
    for (std::size_t b = f; b < dim(); ++b) worst = std::max(worst, std::abs((*this)(f, b) - std::conj((*this)(b, f))));
  return worst;
}

void DoubledState::apply_site(int site, const Eigen::Matrix2cd& fwd, const Eigen::Matrix2cd& bwd) {
  if (site < 0 || site >= L_) throw InvalidParameter("site out of range");
  const Eigen::Matrix2cd bc = bwd.conjugate();
  const std::size_t fbit = std::size_t{1} << (site + L_);
  const std::size_t bbit = std::size_t{1} << site;
  for (std::size_t idx = 0; idx < amp_.size(); ++idx) {
    if (idx & (fbit | bbit)) continue;
    std::array<cplx, 4> v{amp_[idx], amp_[idx | bbit], amp_[idx | fbit], amp_[idx | fbit | bbit]};  // (f, b)
    for (int fo = 0; fo < 2; ++fo) {
      for (int bo = 0; bo < 2; ++bo) {
        cplx acc = 0.0;
        for (int fi = 0; fi < 2; ++fi)
          for (int bi = 0; bi < 2; ++bi) acc += fwd(fo, fi) * bc(bo, bi) * v[2 * fi + bi];
        amp_[idx | (fo ? fbit : 0) | (bo ? bbit : 0)] = acc;
      }
    }
  }
}

DoubledState PauliStringOp::apply(const DoubledState& state) const {
  DoubledState out(state.L());
  std::fill(out.amplitudes().begin(), out.amplitudes().end(), cplx{});
  for (const auto& t : terms) {
    if (static_cast<int>(t.forward.size()) != state.L() || static_cast<int>(t.backward.size()) != state.L())
      throw InvalidParameter("Pauli string length must equal L");
    DoubledState piece = state;
    // rho P_bwd = (P_bwd^dagger)^dagger, and Paulis are Hermitian.
    for (int j = 0; j < state.L(); ++j) piece.apply_site(j, pauli(t.forward[j]), pauli(t.backward[j]));
    for (std::size_t i = 0; i < piece.amplitudes().size(); ++i)
      out.amplitudes()[i] += t.coefficient * piece.amplitudes()[i];
  }
  return out;
}

cplx PauliStringOp::expectation(const DoubledState& state) const { return apply(state).trace(); }

namespace {

// A negative theta reverses the unitary part; everything else is validated as usual.
void validate_signed(const ModelParams& params) {
  ModelParams copy = params;
  copy.theta = std::abs(params.theta);
  copy.validate();
}

}  // namespace

void step_channel(DoubledState& state, const ModelParams& params) {
  validate_signed(params);
  if (params.p * params.dt >= 1.0) throw InvalidParameter("p * dt must be < 1 for a valid Kraus decomposition");
  const int L = state.L();
  const double a = params.theta * params.dt / 2.0;
  Eigen::Matrix2cd u;
  u << std::cos(a), I * std::sin(a), I * std::sin(a), std::cos(a);
  for (int j = 0; j < L; ++j) state.apply_site(j, u, u);
  // Each bond with Z_b Z_{b+1} differing between copies scales by (1 - 2 p dt).
  const double shrink = 1.0 - 2.0 * params.p * params.dt;
  std::array<double, kOracleMaxL + 1> powers{};
  powers[0] = 1.0;
  for (int n = 1; n <= L; ++n) powers[n] = powers[n - 1] * shrink;
  const auto flips = bond_flip_counts(L);
  const std::size_t dim = state.dim();
  auto& amp = state.amplitudes();
  for (std::size_t f = 0; f < dim; ++f)
    for (std::size_t b = 0; b < dim; ++b) amp[(f << L) | b] *= powers[flips[f ^ b]];
}

void evolve(DoubledState& state, const ModelParams& params, double duration, Propagation mode) {
  validate_signed(params);
  if (duration < 0.0) throw InvalidParameter("evolution time must be >= 0");
  if (mode == Propagation::trotter) {
    const double steps = std::round(duration / params.dt);
    if (std::abs(steps * params.dt - duration) > 1e-9 * std::max(1.0, duration))
      throw InvalidParameter("evolution time must be a multiple of dt");
    for (long n = 0; n < static_cast<long>(steps); ++n) step_channel(state, params);
    return;
  }
  const int L = state.L();
  const auto flips = bond_flip_counts(L);
  const double bound = (std::abs(params.theta) + 2.0 * params.p) * L;
  auto& v = state.amplitudes();
  std::vector<cplx> term(v.size()), next(v.size());
  double remaining = duration;
  while (remaining > 0.0) {
    const double tau = bound > 0.0 ? std::min(remaining, 1.0 / bound) : remaining;
    term = v;
    const double scale = norm(v);
    for (int m = 1; m <= 60; ++m) {
      apply_generator(term, next, L, params.theta, params.p, flips);
      const double c = tau / m;
      for (std::size_t i = 0; i < v.size(); ++i) {
        term[i] = c * next[i];
        v[i] += term[i];
      }
      if (norm(term) <= 1e-17 * scale) break;
    }
    remaining -= tau;
  }
}

double string_observable(const DoubledState& state) {
  const cplx tr = state.trace();
  if (std::abs(tr) < 1e-300) throw NumericalFailure("string observable of a zero-trace state");
  cplx acc = 0.0;
  for (std::size_t f = 0; f < state.dim(); ++f) acc += (std::popcount(f) % 2 ? -1.0 : 1.0) * state(f, f);
  return (acc / tr).real();
}

double purity(const DoubledState& state) {
  const cplx tr = state.trace();
  if (std::abs(tr) < 1e-300) throw NumericalFailure("purity of a zero-trace state");
  cplx acc = 0.0;
  for (std::size_t f = 0; f < state.dim(); ++f)
    for (std::size_t b = 0; b < state.dim(); ++b) acc += state(f, b) * state(b, f);
  return (acc / (tr * tr)).real();
}

void apply_weak_symmetry(DoubledState& state, int site) {
  const auto x = pauli('X');
  state.apply_site(site, x, x);
}

std::vector<cplx> sigma_pm_expectations(const DoubledState& state) {
  // Site by site, trade the (f_j, b_j) pair for s_j using (Z + iY) = [[1,1],[-1,-1]]
  // and (Z - iY) = [[1,-1],[1,-1]]; s_j is stored in the forward bit.
  static const double sig[2][2][2] = {{{1, 1}, {-1, -1}}, {{1, -1}, {1, -1}}};  // [s][row][col]
  std::vector<cplx> work = state.amplitudes();
  const int L = state.L();
  for (int j = 0; j < L; ++j) {
    const std::size_t fbit = std::size_t{1} << (j + L);
    const std::size_t bbit = std::size_t{1} << j;
    for (std::size_t idx = 0; idx < work.size(); ++idx) {
      if (idx & (fbit | bbit)) continue;
      const cplx v[2][2] = {{work[idx], work[idx | bbit]}, {work[idx | fbit], work[idx | fbit | bbit]}};
      for (int s = 0; s < 2; ++s) {
        cplx acc = 0.0;
        // Tr(o rho) picks o[b][f] rho[f][b].
        for (int f = 0; f < 2; ++f)
          for (int b = 0; b < 2; ++b) acc += sig[s][b][f] * v[f][b];
        work[idx | (s ? fbit : 0)] = acc;
      }
      work[idx | bbit] = 0.0;
      work[idx | fbit | bbit] = 0.0;
    }
  }
  std::vector<cplx> out(state.dim());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = work[s << L];
  return out;
}

std::vector<TrajectoryPoint> oracle_trajectory(const ModelParams& params, double t_max, int sample_every) {
  params.validate();
  if (sample_every < 1) throw InvalidParameter("sample_every must be >= 1");
  DoubledState state(params.L);
  std::vector<TrajectoryPoint> out{{0.0, string_observable(state)}};
  const long steps = std::lround(t_max / params.dt);
  for (long n = 1; n <= steps; ++n) {
    step_channel(state, params);
    if (n % sample_every == 0) out.push_back({n * params.dt, string_observable(state)});
  }
  return out;
}

DefectResult defect_protocol(const ModelParams& params, int site_i, int site_j, Propagation mode) {
  params.validate();
  if (site_i < 0 || site_j < 0 || site_i >= params.L || site_j >= params.L)
    throw InvalidParameter("defect sites out of range");
  DoubledState first(params.L);
  evolve(first, params, params.T, mode);
  DoubledState plain = first;
  DoubledState defect = first;
  const auto z = pauli('Z');
  // Forward e^{-i pi Z/2} = -iZ, backward its conjugate: rho -> Z rho Z.
  defect.apply_site(site_i, z, z);
  defect.apply_site(site_j, z, z);
  ModelParams reversed = params;
  reversed.theta = -params.theta;
  const double mismatch = std::abs(defect.trace() - plain.trace());
  evolve(plain, reversed, params.T, mode);
  evolve(defect, reversed, params.T, mode);
  return {string_observable(defect) / string_observable(plain), mismatch};
}

namespace {

// Row vector v times the Jordan-Wigner annihilator on site j; bit j set means occupied.
std::vector<cplx> times_site_annihilator(const std::vector<cplx>& v, int j) {
  std::vector<cplx> out(v.size());
  const std::size_t bit = std::size_t{1} << j;
  for (std::size_t s = 0; s < v.size(); ++s) {
    if (!(s & bit)) continue;
    const int string = std::popcount(s & (bit - 1));
    out[s] = (string % 2 ? -1.0 : 1.0) * v[s ^ bit];
  }
  return out;
}

// v c_k with c_k = L^{-1/2} sum_j e^{-ikj} c_j.
std::vector<cplx> times_momentum_annihilator(const std::vector<cplx>& v, double k, int L) {
  std::vector<cplx> out(v.size());
  for (int j = 0; j < L; ++j) {
    const cplx w = std::polar(1.0 / std::sqrt(static_cast<double>(L)), -k * j);
    const auto part = times_site_annihilator(v, j);
    for (std::size_t s = 0; s < v.size(); ++s) out[s] += w * part[s];
  }
  return out;
}

struct ProbeCoefficients {
  std::vector<cplx> numerator;
  std::vector<cplx> denominator;
};

// x-basis bras built from <vac| c_0 and <vac| c_{-pi/2} c_{pi/2} c_0, weighted by
// left eigenvectors of the pi/2 pair block.
ProbeCoefficients probe_coefficients(double g, int L) {
  std::vector<cplx> vac(std::size_t{1} << L);
  vac[0] = 1.0;
  const auto chi_a = times_momentum_annihilator(vac, 0.0, L);
  auto chi_b = times_momentum_annihilator(vac, -pi / 2, L);
  chi_b = times_momentum_annihilator(chi_b, pi / 2, L);
  chi_b = times_momentum_annihilator(chi_b, 0.0, L);

  Eigen::Matrix2cd block;
  block << 0.0, 2.0 * I, -2.0 * I, 4.0 * I * g;
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(block.transpose());
  std::array<int, 2> order{0, 1};
  if (es.eigenvalues()(1).imag() < es.eigenvalues()(0).imag()) std::swap(order[0], order[1]);
  const Eigen::Vector2cd psi(-I, 1.0);
  std::array<Eigen::Vector2cd, 2> left;
  for (int n = 0; n < 2; ++n) {
    const Eigen::Vector2cd w = es.eigenvectors().col(order[n]);
    left[n] = w / (w.transpose() * psi)(0);  // bilinear, not the conjugating dot()
  }
  const Eigen::Vector2cd mixed = 0.5 * (left[0] + left[1]);
  ProbeCoefficients c;
  c.numerator.resize(vac.size());
  c.denominator.resize(vac.size());
  for (std::size_t s = 0; s < vac.size(); ++s) {
    c.numerator[s] = mixed(0) * chi_a[s] + mixed(1) * chi_b[s];
    c.denominator[s] = left[0](0) * chi_a[s] + left[0](1) * chi_b[s];
  }
  return c;
}

cplx probe_value(const ProbeCoefficients& c, const DoubledState& state) {
  const auto t = sigma_pm_expectations(state);
  cplx num = 0.0, den = 0.0;
  for (std::size_t s = 0; s < t.size(); ++s) {
    num += c.numerator[s] * t[s];
    den += c.denominator[s] * t[s];
  }
  if (std::abs(den) < 1e-300) throw NumericalFailure("probe denominator vanished");
  return num / std::abs(den);
}

void check_probe_config(const ModelParams& params) {
  params.validate();
  if (params.L % 4 != 0) throw UnsupportedConfiguration("the pi/2 probe needs L divisible by 4");
  if (!(params.g() > 1.0)) throw UnsupportedConfiguration("the pi/2 probe needs g > 1");
}

}  // namespace

cplx ep_probe_raw(const ModelParams& params, double T) {
  check_probe_config(params);
  const auto coeffs = probe_coefficients(params.g(), params.L);
  DoubledState state(params.L);
  evolve(state, params, T, Propagation::exact);
  return probe_value(coeffs, state);
}

double ep_probe_ratio(const ModelParams& params, double T) {
  check_probe_config(params);
  const auto coeffs = probe_coefficients(params.g(), params.L);
  DoubledState state(params.L);
  const cplx start = probe_value(coeffs, state);
  evolve(state, params, T, Propagation::exact);
  const cplx now = probe_value(coeffs, state);
  return (now * std::conj(start) / std::abs(start)).real();
}

namespace {
constexpr char kSnapshotMagic[4] = {'C', 'T', 'F', 'D'};
constexpr std::uint32_t kSnapshotVersion = 1;
static_assert(std::endian::native == std::endian::little, "snapshots are little-endian");
}  // namespace

void write_snapshot(const DoubledState& state, std::ostream& out) {
  const std::uint32_t header[3] = {kSnapshotVersion, static_cast<std::uint32_t>(state.L()), 0u};
  out.write(kSnapshotMagic, 4);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(state.amplitudes().data()),
            static_cast<std::streamsize>(state.amplitudes().size() * sizeof(cplx)));
  if (!out) throw NumericalFailure("failed to write snapshot");
}

DoubledState read_snapshot(std::istream& in) {
  char magic[4];
  std::uint32_t header[3];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0) throw InvalidParameter("not a state snapshot");
  if (header[0] != kSnapshotVersion) throw InvalidParameter("unsupported snapshot version");
  DoubledState state(static_cast<int>(header[1]));
  in.read(reinterpret_cast<char*>(state.amplitudes().data()),
          static_cast<std::streamsize>(state.amplitudes().size() * sizeof(cplx)));
  if (!in) throw InvalidParameter("truncated snapshot");
  return state;
}

}  // namespace ctfim
