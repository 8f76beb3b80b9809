#pragma once

// Dense 2^L reference implementations used only by tests.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <bit>
#include <complex>
#include <map>
#include <tuple>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

namespace ctfim::testing {

using cplx = std::complex<double>;
using Dense = Eigen::MatrixXcd;

// H = -sum_j Z_j Z_{j+1} - i sum_j g_j X_j on a periodic chain; bit j is site j.
inline Dense ctfim_hamiltonian(const std::vector<double>& fields) {
  const int L = static_cast<int>(fields.size());
  const Eigen::Index dim = Eigen::Index{1} << L;
  Dense h = Dense::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (int j = 0; j < L; ++j) {
      const int a = (s >> j) & 1, b = (s >> ((j + 1) % L)) & 1;
      h(s, s) -= a == b ? 1.0 : -1.0;
      h(s ^ (Eigen::Index{1} << j), s) -= cplx(0.0, fields[j]);
    }
  }
  return h;
}

inline Dense ctfim_hamiltonian(double g, int L) { return ctfim_hamiltonian(std::vector<double>(L, g)); }

inline Eigen::VectorXcd zero_state(int L) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << L);
  v(0) = 1.0;
  return v;
}

// <0|exp(-pT H(g))|0> / <0|exp(-pT H(0))|0>
inline double string_expectation_dense(double g, int L, double pT) {
  const auto v = zero_state(L);
  const Dense num = (-pT * ctfim_hamiltonian(g, L)).exp();
  const Dense den = (-pT * ctfim_hamiltonian(0.0, L)).exp();
  return (num(0, 0) / den(0, 0)).real();
}

inline Dense site_z_product(int L, int i, int j) {
  const Eigen::Index dim = Eigen::Index{1} << L;
  Dense m = Dense::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) m(s, s) = (((s >> i) ^ (s >> j)) & 1) ? -1.0 : 1.0;
  return m;
}

struct DenseGround {
  Eigen::VectorXcd right;
  Eigen::VectorXcd left;  // left eigenvector as a column: left^T H = E left^T
  cplx energy;
};

// Lowest-Re eigenstate within the sector of prod_j X_j = parity.
inline DenseGround dense_ground_uncached(double g, int L, int parity) {
  const Dense h = ctfim_hamiltonian(g, L);
  Eigen::ComplexEigenSolver<Dense> right(h);
  Eigen::ComplexEigenSolver<Dense> left(h.transpose());
  const Eigen::Index dim = h.rows();
  const Eigen::Index all = dim - 1;
  auto parity_of = [&](const Eigen::VectorXcd& v) {
    cplx acc = 0.0;
    for (Eigen::Index s = 0; s < dim; ++s) acc += std::conj(v(s)) * v(all ^ s);
    return (acc / v.squaredNorm()).real();
  };
  Eigen::Index best = -1;
  for (Eigen::Index n = 0; n < dim; ++n) {
    if (std::abs(parity_of(right.eigenvectors().col(n)) - parity) > 1e-6) continue;
    if (best < 0 || right.eigenvalues()(n).real() < right.eigenvalues()(best).real() - 1e-12) best = n;
  }
  DenseGround out;
  out.energy = right.eigenvalues()(best);
  out.right = right.eigenvectors().col(best);
  Eigen::Index match = 0;
  for (Eigen::Index n = 1; n < dim; ++n)
    if (std::abs(left.eigenvalues()(n) - out.energy) < std::abs(left.eigenvalues()(match) - out.energy)) match = n;
  out.left = left.eigenvectors().col(match);
  return out;
}

// Diagonalisation dominates the test time, so results are memoised per process.
inline const DenseGround& dense_ground(double g, int L, int parity) {
  static std::map<std::tuple<double, int, int>, DenseGround> cache;
  const auto key = std::make_tuple(g, L, parity);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, dense_ground_uncached(g, L, parity)).first;
  return it->second;
}

inline cplx dense_correlator(const DenseGround& gs, int L, int i, int j, bool biorthogonal) {
  const Dense zz = site_z_product(L, i, j);
  if (!biorthogonal) return gs.right.dot(zz * gs.right) / gs.right.squaredNorm();
  return (gs.left.transpose() * zz * gs.right)(0, 0) / (gs.left.transpose() * gs.right)(0, 0);
}

inline cplx dense_correlator(double g, int L, int parity, int i, int j, bool biorthogonal) {
  return dense_correlator(dense_ground(g, L, parity), L, i, j, biorthogonal);
}

// Disorder-sum purity: 2^-L sum over fields g_j in {0, g} of |exp(-pT H)|0>|^2,
// divided by <0|exp(-2pT H(0))|0>.
inline double disorder_sum_purity(double g, int L, double pT) {
  const auto v = zero_state(L);
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << L); ++mask) {
    std::vector<double> fields(L);
    for (int j = 0; j < L; ++j) fields[j] = (mask >> j) & 1 ? g : 0.0;
    const Eigen::VectorXcd w = (-pT * ctfim_hamiltonian(fields)).exp() * v;
    sum += w.squaredNorm();
  }
  const Dense free = (-2.0 * pT * ctfim_hamiltonian(0.0, L)).exp();
  return sum / std::ldexp(1.0, L) / free(0, 0).real();
}

}  // namespace ctfim::testing
