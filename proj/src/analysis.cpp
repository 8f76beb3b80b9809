#include "ctfim/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>
#include <numeric>
#include <set>

namespace ctfim {

std::string_view to_string(SeriesSource s) { return s == SeriesSource::analytic ? "analytic" : "oracle"; }

void TimeSeries::validate() const {
  if (times.size() != values.size()) throw InvalidParameter("time series lengths differ");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InvalidParameter("time series times must increase strictly");
}

double extract_frequency(const TimeSeries& series) {
  series.validate();
  std::vector<double> zeros;
  double max_step = 0.0;
  for (std::size_t i = 1; i < series.times.size(); ++i) {
    const double t0 = series.times[i - 1], t1 = series.times[i];
    const double v0 = series.values[i - 1], v1 = series.values[i];
    max_step = std::max(max_step, t1 - t0);
    if (v0 == 0.0 && i > 1) continue;  // counted on the previous interval
    if (v0 == 0.0) {
      zeros.push_back(t0);
    } else if (v1 == 0.0) {
      zeros.push_back(t1);
    } else if ((v0 < 0.0) != (v1 < 0.0)) {
      zeros.push_back(t0 + (t1 - t0) * v0 / (v0 - v1));
    }
  }
  if (zeros.size() < 3) throw InsufficientOscillation("fewer than three zero crossings");
  const double spacing = (zeros.back() - zeros.front()) / static_cast<double>(zeros.size() - 1);
  const double omega = pi / spacing;
  if (omega * max_step >= 0.3) throw InvalidParameter("sampling too coarse: need omega * dt < 0.3");
  return omega;
}

DecayFit extract_decay_rate(const TimeSeries& series, double t_min, double window) {
  series.validate();
  if (!(window > 0.0)) throw InvalidParameter("decay window must be positive");
  const double t_max = t_min + window;
  if (series.times.empty() || series.times.front() > t_min || series.times.back() < t_max)
    throw InvalidParameter("series does not cover the decay window");
  DecayFit fit;
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  int last_sign = 0;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    if (t < t_min || t > t_max) continue;
    const double v = series.values[i];
    if (v == 0.0) throw NumericalFailure("zero value inside the decay window");
    const int sign = v > 0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) fit.sign_change_in_window = true;
    last_sign = sign;
    const double y = std::log(std::abs(v));
    st += t, sy += y, stt += t * t, sty += t * y;
    ++n;
  }
  if (n < 2) throw InvalidParameter("decay window holds fewer than two samples");
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  fit.rate = -slope;
  return fit;
}

double finite_difference(const std::function<double(double)>& f, double x0, int order, double h) {
  if (order != 1 && order != 2) throw InvalidParameter("finite_difference supports orders 1 and 2");
  if (!(h > 0.0)) throw InvalidParameter("finite_difference step must be positive");
  auto stencil = [&](double s) {
    if (order == 1) return (f(x0 + s) - f(x0 - s)) / (2.0 * s);
    return (f(x0 + s) - 2.0 * f(x0) + f(x0 - s)) / (s * s);
  };
  // Both stencils have h^2 leading error.
  return (4.0 * stencil(h / 2) - stencil(h)) / 3.0;
}

std::vector<MasterPoint> scaled_points(const std::vector<ScalingCurve>& curves, double critical_g, double nu,
                                       double a) {
  std::vector<MasterPoint> pts;
  for (const auto& c : curves) {
    const double sx = std::pow(static_cast<double>(c.L), 1.0 / nu);
    const double sy = std::pow(static_cast<double>(c.L), a);
    for (std::size_t i = 0; i < c.g.size(); ++i) pts.push_back({(c.g[i] - critical_g) * sx, c.y[i] * sy, c.L});
  }
  return pts;
}

namespace {

struct MasterFit {
  std::vector<double> knots;
  std::vector<double> heights;
};

// Least-squares piecewise-linear fit on uniform knots; the heights then feed a PCHIP.
MasterFit fit_master(const std::vector<MasterPoint>& pts, int knot_count) {
  auto [lo_it, hi_it] = std::minmax_element(pts.begin(), pts.end(),
                                            [](const auto& a, const auto& b) { return a.x < b.x; });
  const double lo = lo_it->x, hi = hi_it->x;
  MasterFit m;
  m.knots.resize(knot_count);
  for (int i = 0; i < knot_count; ++i) m.knots[i] = lo + (hi - lo) * i / (knot_count - 1);
  m.knots.back() = hi;  // guard the spline's range check against roundoff
  Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(knot_count, knot_count);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(knot_count);
  const double width = (hi - lo) / (knot_count - 1);
  for (const auto& p : pts) {
    int j = std::clamp(static_cast<int>((p.x - lo) / width), 0, knot_count - 2);
    const double t = (p.x - m.knots[j]) / width;
    const double w[2] = {1.0 - t, t};
    for (int r = 0; r < 2; ++r) {
      rhs(j + r) += w[r] * p.y;
      for (int c = 0; c < 2; ++c) normal(j + r, j + c) += w[r] * w[c];
    }
  }
  normal.diagonal().array() += 1e-10;
  const Eigen::VectorXd h = normal.ldlt().solve(rhs);
  m.heights.assign(h.data(), h.data() + knot_count);
  return m;
}

std::vector<MasterPoint> overlap_window(const std::vector<MasterPoint>& points) {
  std::map<int, std::pair<double, double>> range;
  for (const auto& p : points) {
    auto [it, fresh] = range.try_emplace(p.L, p.x, p.x);
    if (!fresh) it->second = {std::min(it->second.first, p.x), std::max(it->second.second, p.x)};
  }
  double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
  for (const auto& [L, r] : range) lo = std::max(lo, r.first), hi = std::min(hi, r.second);
  std::vector<MasterPoint> inside;
  std::map<int, int> count;
  for (const auto& p : points) {
    if (p.x >= lo && p.x <= hi) {
      inside.push_back(p);
      ++count[p.L];
    }
  }
  if (count.size() < range.size() ||
      std::any_of(count.begin(), count.end(), [](const auto& kv) { return kv.second < 2; }))
    return {};
  return inside;
}

}  // namespace

double collapse_cost(const std::vector<MasterPoint>& all_points, int knots) {
  if (all_points.size() < 4) throw InvalidParameter("collapse needs at least four points");
  if (knots < 4) throw InvalidParameter("collapse needs at least four knots");
  const auto points = overlap_window(all_points);
  if (points.size() < 4) return 1.0;
  double mean = 0.0;
  for (const auto& p : points) mean += p.y;
  mean /= static_cast<double>(points.size());
  double var = 0.0;
  for (const auto& p : points) var += (p.y - mean) * (p.y - mean);
  var /= static_cast<double>(points.size());
  if (var == 0.0) return 0.0;
  auto m = fit_master(points, knots);
  if (!(m.knots.back() > m.knots.front())) return 1.0;
  boost::math::interpolators::pchip<std::vector<double>> spline(std::move(m.knots), std::move(m.heights));
  double sq = 0.0;
  for (const auto& p : points) {
    const double r = spline(p.x) - p.y;
    sq += r * r;
  }
  return sq / static_cast<double>(points.size()) / var;
}

CollapseResult collapse(const std::vector<ScalingCurve>& curves, const CollapseAnsatz& ansatz) {
  std::set<int> sizes;
  for (const auto& c : curves) sizes.insert(c.L);
  if (sizes.size() < 3) throw InvalidParameter("collapse needs at least three distinct L");
  const int parity = *sizes.begin() % 2;
  if (std::any_of(sizes.begin(), sizes.end(), [parity](int L) { return L % 2 != parity; }))
    throw InvalidParameter("collapse mixes even and odd L");

  auto cost = [&](double nu, double a) {
    return collapse_cost(scaled_points(curves, ansatz.critical_g, nu, a), ansatz.knots);
  };
  const double a_lo = ansatz.fit_prefactor ? ansatz.a_min : 0.0;
  const double a_hi = ansatz.fit_prefactor ? ansatz.a_max : 0.0;

  // Coarse scan to land in the right basin.
  double best_nu = ansatz.nu_min, best_a = a_lo, best = cost(best_nu, best_a);
  const int nu_steps = 60, a_steps = ansatz.fit_prefactor ? 80 : 0;
  for (int i = 0; i <= nu_steps; ++i) {
    const double nu = ansatz.nu_min + (ansatz.nu_max - ansatz.nu_min) * i / nu_steps;
    for (int j = 0; j <= a_steps; ++j) {
      const double a = a_steps == 0 ? 0.0 : a_lo + (a_hi - a_lo) * j / a_steps;
      const double c = cost(nu, a);
      if (c < best) best = c, best_nu = nu, best_a = a;
    }
  }

  // Coordinate descent with Brent line searches in a shrinking box.
  double nu_span = (ansatz.nu_max - ansatz.nu_min) / nu_steps;
  double a_span = a_steps == 0 ? 0.0 : (a_hi - a_lo) / a_steps;
  for (int sweep = 0; sweep < 12; ++sweep) {
    const double before = best;
    {
      const double lo = std::max(ansatz.nu_min, best_nu - nu_span), hi = std::min(ansatz.nu_max, best_nu + nu_span);
      auto [x, c] = boost::math::tools::brent_find_minima([&](double nu) { return cost(nu, best_a); }, lo, hi, 40);
      if (c < best) best = c, best_nu = x;
    }
    if (ansatz.fit_prefactor) {
      const double lo = std::max(a_lo, best_a - a_span), hi = std::min(a_hi, best_a + a_span);
      auto [x, c] = boost::math::tools::brent_find_minima([&](double a) { return cost(best_nu, a); }, lo, hi, 40);
      if (c < best) best = c, best_a = x;
    }
    nu_span *= 0.5;
    a_span *= 0.5;
    if (before - best <= 1e-14 * std::max(1.0, before) && sweep > 2) break;
  }

  CollapseResult out;
  out.nu = best_nu;
  if (ansatz.fit_prefactor) out.prefactor_exponent = best_a;
  out.cost = best;
  out.master_curve = scaled_points(curves, ansatz.critical_g, best_nu, best_a);
  std::sort(out.master_curve.begin(), out.master_curve.end(),
            [](const auto& a, const auto& b) { return a.x < b.x; });
  return out;
}

}  // namespace ctfim
