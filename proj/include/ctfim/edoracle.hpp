#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctfim/core.hpp"

namespace ctfim {

inline constexpr int kOracleMaxL = 8;

// Vectorised density matrix rho = sum amp[f, b] |f><b| over 4^L entries,
// flattened as f * 2^L + b. Bit j of a basis label is site j.
class DoubledState {
 public:
  // |0...0><0...0|
  explicit DoubledState(int L);
  static DoubledState maximally_mixed(int L);

  [[nodiscard]] int L() const { return L_; }
  [[nodiscard]] std::size_t dim() const { return std::size_t{1} << L_; }
  [[nodiscard]] std::size_t index(std::size_t fwd, std::size_t bwd) const { return (fwd << L_) | bwd; }

  cplx& operator()(std::size_t fwd, std::size_t bwd) { return amp_[index(fwd, bwd)]; }
  cplx operator()(std::size_t fwd, std::size_t bwd) const { return amp_[index(fwd, bwd)]; }
  std::vector<cplx>& amplitudes() { return amp_; }
  [[nodiscard]] const std::vector<cplx>& amplitudes() const { return amp_; }

  [[nodiscard]] cplx trace() const;
  // max |amp(f, b) - conj amp(b, f)|
  [[nodiscard]] double hermiticity_defect() const;

  // rho -> A rho B^dagger on site j.
  void apply_site(int site, const Eigen::Matrix2cd& fwd, const Eigen::Matrix2cd& bwd);

 private:
  int L_;
  std::vector<cplx> amp_;
};

// One letter per site from {I, X, Y, Z}. The forward string multiplies rho
// from the left and the backward string from the right.
struct PauliTerm {
  cplx coefficient{1.0, 0.0};
  std::string forward;
  std::string backward;
};

struct PauliStringOp {
  std::vector<PauliTerm> terms;

  // sum_t c_t P_fwd rho P_bwd
  [[nodiscard]] DoubledState apply(const DoubledState& state) const;
  // sum_t c_t Tr(P_fwd rho P_bwd)
  [[nodiscard]] cplx expectation(const DoubledState& state) const;
};

// One trotter layer: e^{i theta dt sigma^x / 2} on every site, then the
// nearest-neighbour ZZ dephasing channel on every periodic bond.
void step_channel(DoubledState& state, const ModelParams& params);

enum class Propagation { trotter, exact };

// Advances by `duration`. Trotter mode takes round(duration / dt) layers; exact
// mode integrates the continuous-time generator by Taylor substeps. A negative
// theta runs the rotation backwards.
void evolve(DoubledState& state, const ModelParams& params, double duration, Propagation mode);

// Tr(prod_j Z_j rho) / Tr rho
double string_observable(const DoubledState& state);

// Tr rho^2 / (Tr rho)^2
double purity(const DoubledState& state);

// rho -> X_j rho X_j, the on-site weak symmetry.
void apply_weak_symmetry(DoubledState& state, int site);

// t[s] = Tr(prod_j (Z + i s_j Y)_j rho) with s_j = +1 for bit 0 and -1 for bit 1.
std::vector<cplx> sigma_pm_expectations(const DoubledState& state);

struct TrajectoryPoint {
  double T = 0.0;
  double value = 0.0;
};

// String observable sampled every `sample_every` trotter layers up to t_max.
std::vector<TrajectoryPoint> oracle_trajectory(const ModelParams& params, double t_max, int sample_every = 1);

struct DefectResult {
  double ratio = 0.0;
  double trace_mismatch = 0.0;  // |Tr rho_defect - Tr rho|
};

// Evolve for T, conjugate by Z_i Z_j, evolve for T with theta reversed, and
// compare the string observable with the defect-free run.
DefectResult defect_protocol(const ModelParams& params, int site_i, int site_j,
                             Propagation mode = Propagation::exact);

// Oscillating probe at the pi/2 mode for L divisible by 4 and g > 1. The
// value is phase-normalised so that it starts real and positive.
double ep_probe_ratio(const ModelParams& params, double T);

// Raw complex ratio Tr O1 rho / |Tr O2 rho| before phase normalisation.
cplx ep_probe_raw(const ModelParams& params, double T);

// Flat binary snapshot: 16-byte header then interleaved re/im doubles.
void write_snapshot(const DoubledState& state, std::ostream& out);
DoubledState read_snapshot(std::istream& in);

}  // namespace ctfim
