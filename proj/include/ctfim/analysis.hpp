#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "ctfim/asymptotics.hpp"
#include "ctfim/errors.hpp"

namespace ctfim {

enum class SeriesSource { analytic, oracle };

std::string_view to_string(SeriesSource s);

struct TimeSeries {
  std::vector<double> times;   // strictly increasing
  std::vector<double> values;
  SeriesSource source = SeriesSource::analytic;

  // Throws InvalidParameter on length mismatch or non-increasing times.
  void validate() const;
};

// Raised when a series has too few sign changes to define a frequency.
class InsufficientOscillation : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

// pi over the mean spacing of linearly interpolated zero crossings.
double extract_frequency(const TimeSeries& series);

struct DecayFit {
  double rate = 0.0;            // minus the slope of log|value|
  bool sign_change_in_window = false;
};

// Least-squares slope of log|value| over [t_min, t_min + window].
DecayFit extract_decay_rate(const TimeSeries& series, double t_min, double window);

// Central difference of order 1 or 2 with one Richardson refinement.
double finite_difference(const std::function<double(double)>& f, double x0, int order, double h);

struct CollapseAnsatz {
  double critical_g = 1.0;
  bool fit_prefactor = true;   // y scaled by L^a with a free
  double nu_min = 0.5, nu_max = 2.0;
  double a_min = -2.0, a_max = 2.0;
  int knots = 20;
};

struct MasterPoint {
  double x = 0.0;
  double y = 0.0;
  int L = 0;  // curve the point came from
};

struct CollapseResult {
  double nu = 1.0;
  std::optional<double> prefactor_exponent;
  double cost = 0.0;
  std::vector<MasterPoint> master_curve;
};

// Scaled coordinates x = (g - g_c) L^{1/nu}, y L^a for every point of every curve.
std::vector<MasterPoint> scaled_points(const std::vector<ScalingCurve>& curves, double critical_g, double nu,
                                       double a);

// Spread of the points about a monotone spline master curve, normalised by the variance of y.
// Only the scaled-x window shared by every curve enters; outside it a flexible master
// could follow each curve separately. Returns 1 when fewer than two points per curve overlap.
double collapse_cost(const std::vector<MasterPoint>& points, int knots = 20);

// Minimises collapse_cost over the ansatz box by grid search plus coordinate descent.
// Requires at least three distinct sizes of a single parity.
CollapseResult collapse(const std::vector<ScalingCurve>& curves, const CollapseAnsatz& ansatz = {});

}  // namespace ctfim
