#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ctfim/analysis.hpp"
#include "ctfim/asymptotics.hpp"
#include "ctfim/correlators.hpp"
#include "ctfim/edoracle.hpp"
#include "ctfim/errors.hpp"
#include "ctfim/meanfield.hpp"
#include "ctfim/observable.hpp"
#include "ctfim/spectrum.hpp"
#include "ctfim/version.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

ctfim::Sector parse_sector(const std::string& s) {
  if (s == "apbc") return ctfim::Sector::apbc;
  if (s == "pbc") return ctfim::Sector::pbc;
  throw ctfim::InvalidParameter("sector must be 'apbc' or 'pbc', got '" + s + "'");
}

ctfim::ModelParams params(int L, double g, double p, double T) {
  auto m = ctfim::ModelParams::at_field(g, p, L, T);
  m.validate();
  return m;
}

}  // namespace

PYBIND11_MODULE(ctfim_lab, m) {
  m.doc() = "Free-fermion solution, channel oracle and mean field for the dissipative Ising chain";
  m.attr("__version__") = ctfim::kVersion;

  py::register_exception<ctfim::InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<ctfim::ExceptionalPointError>(m, "ExceptionalPointError", PyExc_ArithmeticError);
  py::register_exception<ctfim::NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception<ctfim::UnsupportedConfiguration>(m, "UnsupportedConfiguration", PyExc_NotImplementedError);

  m.def("quasiparticle_energy", &ctfim::quasiparticle_energy, "g"_a, "k"_a,
        "Principal-branch complex quasiparticle energy at field g and momentum k.");
  m.def("is_exceptional", &ctfim::is_exceptional, "g"_a, "k"_a);
  m.def("real_gap", &ctfim::real_gap, "g"_a);

  m.def(
      "string_expectation",
      [](int L, double g, double p, double T) { return ctfim::string_expectation(params(L, g, p, T)).value; },
      "L"_a, "g"_a, "p"_a, "T"_a, "Analytic string observable at time T.");
  m.def(
      "qubit0d",
      [](double g, double p, double T) { return ctfim::qubit0d_observable(ctfim::ModelParams::at_field(g, p, 1, T)); }, "g"_a, "p"_a,
      "T"_a);

  m.def(
      "decay_rate",
      [](double g, double p, int L, std::optional<std::string> sector) {
        return ctfim::decay_rate(g, p, L, sector ? parse_sector(*sector) : ctfim::leading_sector(L));
      },
      "g"_a, "p"_a, "L"_a, "sector"_a = py::none());
  m.def("decay_rate_limit", &ctfim::decay_rate_limit, "g"_a, "p"_a);
  m.def("frequency_odd", &ctfim::frequency_odd, "g"_a, "theta"_a, "L"_a);
  m.def("frequency_odd_limit", &ctfim::frequency_odd_limit, "g"_a, "theta"_a);
  m.def("phase_offset_odd", &ctfim::phase_offset_odd, "g"_a, "L"_a);
  m.def("gamma_curvature", &ctfim::gamma_curvature, "g"_a, "p"_a, "L"_a = py::none());
  m.def(
      "late_time_character",
      [](double g, double p, int L) {
        const auto c = ctfim::late_time_character(g, p, L);
        return py::dict("gamma"_a = c.gamma, "gamma_prime"_a = c.gamma_prime, "omega"_a = c.omega, "phi"_a = c.phi);
      },
      "g"_a, "p"_a, "L"_a);

  m.def(
      "oracle_trajectory",
      [](int L, double g, double p, double dt, double t_max, int sample_every) {
        auto m = params(L, g, p, 0.0);
        m.dt = dt;
        std::vector<std::pair<double, double>> out;
        for (const auto& pt : ctfim::oracle_trajectory(m, t_max, sample_every)) out.emplace_back(pt.T, pt.value);
        return out;
      },
      "L"_a, "g"_a, "p"_a, "dt"_a, "t_max"_a, "sample_every"_a = 1,
      "Trotterised channel on the doubled space; list of (T, value).");
  m.def(
      "ep_probe_ratio", [](int L, double g, double p, double T) { return ctfim::ep_probe_ratio(params(L, g, p, 0.0), T); },
      "L"_a, "g"_a, "p"_a, "T"_a);

  m.def(
      "spin_correlator",
      [](double g, int L, int i, int j, std::optional<std::string> sector) {
        ctfim::CorrelatorOptions o;
        if (sector) o.sector = parse_sector(*sector);
        return ctfim::spin_correlator(g, L, i, j, o);
      },
      "g"_a, "L"_a, "i"_a, "j"_a, "sector"_a = py::none());
  m.def(
      "bicorrelator",
      [](double g, int L, int i, int j, std::optional<std::string> sector) {
        return ctfim::bicorrelator(g, L, i, j, sector ? std::optional(parse_sector(*sector)) : std::nullopt);
      },
      "g"_a, "L"_a, "i"_a, "j"_a, "sector"_a = py::none());
  m.def(
      "magnetization",
      [](double g, int L, bool use_bicorrelator) {
        return ctfim::magnetization_estimate(g, L, use_bicorrelator).value;
      },
      "g"_a, "L"_a, "use_bicorrelator"_a = false);

  m.def(
      "saddles",
      [](double g, int d, double T) {
        py::list out;
        for (const auto& s : ctfim::solve_saddles(g, d, T)) {
          out.append(py::dict("class"_a = std::string(ctfim::to_string(s.class_tag)), "phi0"_a = s.phi0,
                              "action_per_site"_a = s.action_per_site,
                              "instability_frequency"_a = s.stability.instability_frequency,
                              "gap"_a = s.stability.gap));
        }
        return out;
      },
      "g"_a, "d"_a, "T"_a, "Every saddle with its action per site and stability data.");
  m.def(
      "dominant_saddle_class",
      [](double g, int d, double T) { return std::string(ctfim::to_string(ctfim::dominant_saddle(g, d, T).solution.class_tag)); },
      "g"_a, "d"_a, "T"_a);

  m.def(
      "collapse",
      [](const std::string& quantity, const std::vector<double>& g_window, const std::vector<int>& sizes, double p,
         bool fit_prefactor, double critical_g) {
        ctfim::ScalingQuantity q;
        if (quantity == "frequency") q = ctfim::ScalingQuantity::frequency;
        else if (quantity == "curvature") q = ctfim::ScalingQuantity::curvature;
        else throw ctfim::InvalidParameter("quantity must be 'frequency' or 'curvature'");
        ctfim::CollapseAnsatz ansatz;
        ansatz.fit_prefactor = fit_prefactor;
        ansatz.critical_g = critical_g;
        const auto r = ctfim::collapse(ctfim::scaling_dataset(q, g_window, sizes, p), ansatz);
        return py::dict("nu"_a = r.nu, "prefactor_exponent"_a = r.prefactor_exponent, "cost"_a = r.cost);
      },
      "quantity"_a, "g_window"_a, "sizes"_a, "p"_a = 1.0, "fit_prefactor"_a = true, "critical_g"_a = 1.0);
}
