#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <optional>

#include "ctfim/analysis.hpp"
#include "ctfim/asymptotics.hpp"
#include "ctfim/correlators.hpp"
#include "ctfim/edoracle.hpp"
#include "ctfim/errors.hpp"
#include "ctfim/meanfield.hpp"
#include "ctfim/observable.hpp"
#include "ctfim/spectrum.hpp"

namespace lab {

using ctfim::InvalidParameter;
using json = nlohmann::ordered_json;

namespace {

std::vector<double> time_grid(double t_min, double t_max, double dt, const char* field) {
  if (!(dt > 0.0)) throw InvalidParameter(std::string(field) + ": sample step must be positive");
  if (!(t_max >= t_min) || t_min < 0.0) throw InvalidParameter("--t-max must be >= --t-min >= 0");
  std::vector<double> t;
  const long n = std::lround(std::floor((t_max - t_min) / dt + 1e-9));
  for (long i = 0; i <= n; ++i) t.push_back(t_min + i * dt);
  return t;
}

json size_json(const std::optional<int>& L) { return L ? json(*L) : json("inf"); }
Cell size_cell(const std::optional<int>& L) { return L ? Cell(static_cast<long>(*L)) : Cell(std::string("inf")); }

template <class R>
std::vector<std::optional<R>> sweep(CommandOutput& out, const RunContext& ctx, std::size_t count,
                                    const std::function<R(std::size_t)>& job) {
  out.requested_points += count;
  return run_sweep<R>(count, ctx.jobs, job, out.failures);
}

// ---------------------------------------------------------------------------

std::shared_ptr<Command> observable_command(CLI::App& root) {
  struct Opts {
    int L = 0;
    double g = 0.0, p = 1.0, t_min = 0.0, t_max = 0.0, dt = 0.01;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_shared<Command>();
  cmd->name = "observable";
  cmd->app = root.add_subcommand("observable", "Analytic string observable time series, columns T,value");
  cmd->app->add_option("--L", o->L, "Chain length")->required();
  cmd->app->add_option("--g", o->g, "Field g = theta / p")->required();
  cmd->app->add_option("--p", o->p, "Dissipation rate")->capture_default_str();
  cmd->app->add_option("--t-min", o->t_min, "First sample time")->capture_default_str();
  cmd->app->add_option("--t-max", o->t_max, "Last sample time")->required();
  cmd->app->add_option("--dt-sample", o->dt, "Sample spacing")->capture_default_str();
  cmd->run = [o](const RunContext& ctx) {
    CommandOutput out;
    const auto t = time_grid(o->t_min, o->t_max, o->dt, "--dt-sample");
    ctfim::ModelParams::at_field(o->g, o->p, o->L, 0.0).validate();
    auto values = sweep<double>(out, ctx, t.size(), [&](std::size_t i) {
      return ctfim::string_expectation(ctfim::ModelParams::at_field(o->g, o->p, o->L, t[i])).value;
    });
    out.table.columns = {"T", "value"};
    for (std::size_t i = 0; i < t.size(); ++i)
      if (values[i]) out.table.rows.push_back({t[i], *values[i]});
    out.metadata["config"] = {{"L", o->L}, {"g", o->g}, {"p", o->p}, {"t_min", o->t_min}, {"t_max", o->t_max},
                              {"dt_sample", o->dt}};
    out.metadata["tolerances"] = {{"exceptional_point", ctfim::kExceptionalTolerance}};
    return out;
  };
  return cmd;
}

std::shared_ptr<Command> oracle_command(CLI::App& root) {
  struct Opts {
    int L = 0, every = 1;
    double g = 0.0, p = 1.0, dt = 0.01, t_max = 0.0;
    bool compare = false;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_shared<Command>();
  cmd->name = "oracle";
  cmd->app = root.add_subcommand("oracle", "Trotterised channel on the doubled space, columns T,oracle[,analytic,abs_diff]");
  cmd->app->add_option("--L", o->L, "Chain length, at most 8")->required();
  cmd->app->add_option("--g", o->g, "Field g = theta / p")->required();
  cmd->app->add_option("--p", o->p, "Dissipation rate")->capture_default_str();
  cmd->app->add_option("--dt", o->dt, "Trotter step")->capture_default_str();
  cmd->app->add_option("--t-max", o->t_max, "Final time")->required();
  cmd->app->add_option("--sample-every", o->every, "Emit every n-th layer")->capture_default_str();
  cmd->app->add_flag("--compare", o->compare, "Add analytic and abs_diff columns");
  cmd->run = [o](const RunContext& ctx) {
    CommandOutput out;
    auto m = ctfim::ModelParams::at_field(o->g, o->p, o->L, 0.0);
    m.dt = o->dt;
    if (o->L > ctfim::kOracleMaxL)
      throw ctfim::UnsupportedConfiguration("oracle supports L <= " + std::to_string(ctfim::kOracleMaxL));
    const auto traj = ctfim::oracle_trajectory(m, o->t_max, o->every);
    out.requested_points = traj.size();
    out.table.columns = {"T", "oracle"};
    std::vector<std::optional<double>> analytic(traj.size());
    if (o->compare) {
      out.table.columns.insert(out.table.columns.end(), {"analytic", "abs_diff"});
      analytic = run_sweep<double>(traj.size(), ctx.jobs, [&](std::size_t i) {
        return ctfim::string_expectation(ctfim::ModelParams::at_field(o->g, o->p, o->L, traj[i].T)).value;
      }, out.failures);
    }
    for (std::size_t i = 0; i < traj.size(); ++i) {
      if (!o->compare) out.table.rows.push_back({traj[i].T, traj[i].value});
      else if (analytic[i])
        out.table.rows.push_back({traj[i].T, traj[i].value, *analytic[i], std::abs(traj[i].value - *analytic[i])});
    }
    out.metadata["config"] = {{"L", o->L}, {"g", o->g}, {"p", o->p}, {"dt", o->dt}, {"t_max", o->t_max},
                              {"sample_every", o->every}, {"compare", o->compare}};
    out.metadata["tolerances"] = {{"kraus_validity", "p * dt < 1"}};
    return out;
  };
  return cmd;
}

std::shared_ptr<Command> rates_command(CLI::App& root) {
  struct Opts {
    std::string sizes, g_spec, quantity = "gamma";
    double p = 1.0;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_shared<Command>();
  cmd->name = "rates";
  cmd->app = root.add_subcommand("rates", "Late-time rates over (L, g), columns g,L,value");
  cmd->app->add_option("--L-list", o->sizes, "Sizes: list or start:stop:step; 'inf' for the thermodynamic limit")
      ->required();
  cmd->app->add_option("--g-range,--g-list", o->g_spec, "Fields: start:stop:step (stop excluded) or a comma list")
      ->required();
  cmd->app->add_option("--p", o->p, "Dissipation rate")->capture_default_str();
  cmd->app->add_option("--quantity", o->quantity, "gamma | gamma_prime | omega | phi | d1gamma | d2gamma")
      ->check(CLI::IsMember({"gamma", "gamma_prime", "omega", "phi", "d1gamma", "d2gamma"}))
      ->capture_default_str();
  cmd->run = [o](const RunContext& ctx) {
    CommandOutput out;
    const auto sizes = parse_sizes(o->sizes, "--L-list", true);
    const auto gs = parse_reals(o->g_spec, "--g-range");
    const std::string q = o->quantity;
    const double p = o->p;
    auto value = [q, p](double g, const std::optional<int>& L) -> double {
      const double theta = g * p;
      if (!L) {
        if (q == "gamma") return ctfim::decay_rate_limit(g, p);
        if (q == "omega") return ctfim::frequency_odd_limit(g, theta);
        if (q == "d2gamma") return ctfim::gamma_curvature(g, p, std::nullopt);
        if (q == "d1gamma")
          return ctfim::finite_difference([p](double x) { return ctfim::decay_rate_limit(x, p); }, g, 1,
                                          std::max(1e-5, 1e-3 * std::abs(g - 1.0)));
        throw InvalidParameter("--quantity " + q + " needs a finite L");
      }
      const int size = *L;
      if (q == "gamma") return ctfim::decay_rate(g, p, size, ctfim::leading_sector(size));
      if (q == "gamma_prime") {
        if (size % 2) throw InvalidParameter("gamma_prime is defined for even L");
        return ctfim::decay_rate(g, p, size, ctfim::half_pi_sector(size));
      }
      if (q == "omega") return size % 2 ? ctfim::frequency_odd(g, theta, size) : ctfim::frequency_even(g, theta);
      if (q == "phi") return ctfim::phase_offset_odd(g, size);
      if (q == "d2gamma") return ctfim::gamma_curvature(g, p, size);
      const auto sector = ctfim::leading_sector(size);
      return ctfim::finite_difference([=](double x) { return ctfim::decay_rate(x, p, size, sector); }, g, 1,
                                      std::max(1e-5, 1e-3 * std::abs(g - 1.0)));
    };
    const std::size_t n = sizes.size() * gs.size();
    auto values = sweep<double>(out, ctx, n, [&](std::size_t i) { return value(gs[i % gs.size()], sizes[i / gs.size()]); });
    out.table.columns = {"g", "L", "value"};
    for (std::size_t i = 0; i < n; ++i)
      if (values[i]) out.table.rows.push_back({gs[i % gs.size()], size_cell(sizes[i / gs.size()]), *values[i]});
    json l = json::array();
    for (const auto& L : sizes) l.push_back(size_json(L));
    out.metadata["config"] = {{"L_list", l}, {"g_values", gs}, {"p", o->p}, {"quantity", q}};
    out.metadata["tolerances"] = {{"finite_difference_step", "max(1e-5, 1e-3 |g - 1|), one Richardson step"},
                                  {"quadrature", "Gauss-Kronrod 61, relative 1e-12, depth 12"}};
    return out;
  };
  return cmd;
}

std::shared_ptr<Command> collapse_command(CLI::App& root) {
  struct Opts {
    std::string sizes, g_spec, quantity = "frequency", side = "split";
    double p = 1.0, gc = 1.0;
    bool no_prefactor = false;
    int knots = 20;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_shared<Command>();
  cmd->name = "collapse";
  cmd->app = root.add_subcommand("collapse", "Scaling collapse; columns side,L,g,y,x_scaled,y_scaled, exponents in the JSON");
  cmd->app->add_option("--L-list", o->sizes, "At least three sizes of one parity")->required();
  cmd->app->add_option("--g-range,--g-list", o->g_spec, "Field window")->required();
  cmd->app->add_option("--quantity", o->quantity, "frequency | curvature")
      ->check(CLI::IsMember({"frequency", "curvature"}))
      ->capture_default_str();
  cmd->app->add_option("--side", o->side,
                       "split: fit g <= gc and g >= gc separately; above | below: one side only; joint: whole window")
      ->check(CLI::IsMember({"split", "above", "below", "joint"}))
      ->capture_default_str();
  cmd->app->add_option("--p", o->p, "Dissipation rate (curvature only)")->capture_default_str();
  cmd->app->add_option("--gc", o->gc, "Critical field")->capture_default_str();
  cmd->app->add_option("--knots", o->knots, "Master-curve knots")->capture_default_str();
  cmd->app->add_flag("--no-prefactor", o->no_prefactor, "Fix the L power prefactor to zero");
  cmd->run = [o](const RunContext&) {
    CommandOutput out;
    std::vector<int> sizes;
    for (const auto& L : parse_sizes(o->sizes, "--L-list")) sizes.push_back(*L);
    const auto gs = parse_reals(o->g_spec, "--g-range");
    const auto quantity = o->quantity == "frequency" ? ctfim::ScalingQuantity::frequency : ctfim::ScalingQuantity::curvature;
    ctfim::CollapseAnsatz ansatz;
    ansatz.critical_g = o->gc;
    ansatz.fit_prefactor = !o->no_prefactor;
    ansatz.knots = o->knots;

    std::vector<std::pair<std::string, std::vector<double>>> sides;
    auto keep = [&](const char* name, auto pred) {
      std::vector<double> sel;
      std::copy_if(gs.begin(), gs.end(), std::back_inserter(sel), pred);
      if (sel.size() >= 2) sides.emplace_back(name, std::move(sel));
    };
    if (o->side == "joint") sides.emplace_back("joint", gs);
    if (o->side == "split" || o->side == "above") keep("above", [&](double g) { return g >= o->gc; });
    if (o->side == "split" || o->side == "below") keep("below", [&](double g) { return g <= o->gc; });
    if (sides.empty()) throw InvalidParameter("--g-range has fewer than two points on the requested side of --gc");

    out.table.columns = {"side", "L", "g", "y", "x_scaled", "y_scaled"};
    json fits = json::object();
    for (const auto& [side, window] : sides) {
      const auto curves = ctfim::scaling_dataset(quantity, window, sizes, o->p);
      const auto r = ctfim::collapse(curves, ansatz);
      const double a = r.prefactor_exponent.value_or(0.0);
      out.requested_points += sizes.size() * window.size();
      for (const auto& c : curves) {
        const double sx = std::pow(static_cast<double>(c.L), 1.0 / r.nu), sy = std::pow(static_cast<double>(c.L), a);
        for (std::size_t i = 0; i < c.g.size(); ++i)
          out.table.rows.push_back({side, static_cast<long>(c.L), c.g[i], c.y[i], (c.g[i] - o->gc) * sx, c.y[i] * sy});
      }
      fits[side] = {{"nu", r.nu}, {"prefactor_exponent", r.prefactor_exponent ? json(a) : json(nullptr)},
                    {"cost", r.cost}};
    }
    out.metadata["config"] = {{"L_list", sizes}, {"g_values", gs}, {"quantity", o->quantity}, {"side", o->side},
                              {"p", o->p}, {"gc", o->gc}, {"knots", o->knots}, {"fit_prefactor", ansatz.fit_prefactor}};
    out.metadata["fit"] = fits;
    out.metadata["tolerances"] = {{"nu_box", {ansatz.nu_min, ansatz.nu_max}},
                                  {"a_box", {ansatz.a_min, ansatz.a_max}},
                                  {"master_curve", "hat-basis least squares, ridge 1e-10, PCHIP; cost = MSE / var on the shared x window"}};
    return out;
  };
  return cmd;
}

std::shared_ptr<Command> correlators_command(CLI::App& root) {
  struct Opts {
    std::string sizes, g_spec, seps, quantity = "C", fit = "none";
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_shared<Command>();
  cmd->name = "correlators";
  cmd->app = root.add_subcommand("correlators", "Spin correlators, columns g,L,r,real,imag");
  cmd->app->add_option("--L-list", o->sizes, "Chain lengths")->required();
  cmd->app->add_option("--g-list,--g-range", o->g_spec, "Fields")->required();
  cmd->app->add_option("--r-list", o->seps, "Separations (default L/2)");
  cmd->app->add_option("--quantity", o->quantity, "C | B | magnetization")
      ->check(CLI::IsMember({"C", "B", "magnetization"}))
      ->capture_default_str();
  cmd->app->add_option("--fit", o->fit, "none | power_law (vs L) | exp_const (vs r)")
      ->check(CLI::IsMember({"none", "power_law", "exp_const"}))
      ->capture_default_str();
  cmd->run = [o](const RunContext& ctx) {
    CommandOutput out;
    const auto gs = parse_reals(o->g_spec, "--g-list");
    std::vector<int> sizes;
    for (const auto& L : parse_sizes(o->sizes, "--L-list")) sizes.push_back(*L);
    std::vector<int> seps;
    if (!o->seps.empty())
      for (const auto& r : parse_sizes(o->seps, "--r-list")) seps.push_back(*r);
    struct Point {
      double g;
      int L, r;
    };
    std::vector<Point> points;
    for (double g : gs)
      for (int L : sizes) {
        if (seps.empty() || o->quantity == "magnetization") points.push_back({g, L, L / 2});
        else
          for (int r : seps) points.push_back({g, L, r});
      }
    const std::string q = o->quantity;
    auto values = sweep<ctfim::cplx>(out, ctx, points.size(), [&](std::size_t i) -> ctfim::cplx {
      const auto& pt = points[i];
      if (q == "C") return ctfim::spin_correlator(pt.g, pt.L, 0, pt.r);
      if (q == "B") return ctfim::bicorrelator(pt.g, pt.L, 0, pt.r);
      const auto m = ctfim::magnetization_estimate(pt.g, pt.L);
      return {m.value, m.imaginary_residue};
    });
    out.table.columns = {"g", "L", "r", "real", "imag"};
    std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_g;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!values[i]) continue;
      const auto& pt = points[i];
      out.table.rows.push_back({pt.g, static_cast<long>(pt.L), static_cast<long>(pt.r), values[i]->real(), values[i]->imag()});
      by_g[pt.g].first.push_back(o->fit == "power_law" ? pt.L : pt.r);
      by_g[pt.g].second.push_back(q == "B" ? std::abs(*values[i]) : values[i]->real());
    }
    json fits = json::array();
    if (o->fit != "none") {
      for (const auto& [g, xy] : by_g) {
        json f{{"g", g}};
        try {
          const auto r = o->fit == "power_law" ? ctfim::fit_power_law(xy.first, xy.second)
                                               : ctfim::fit_exponential_plus_constant(xy.first, xy.second);
          f["amplitude"] = r.amplitude;
          if (r.exponent) f["exponent"] = *r.exponent;
          if (r.xi) f["xi"] = *r.xi;
          if (r.constant) f["constant"] = *r.constant;
          f["residual"] = r.residual;
        } catch (const std::exception& e) {
          f["error"] = e.what();
        }
        fits.push_back(f);
      }
    }
    out.metadata["config"] = {{"g_values", gs}, {"L_list", sizes}, {"r_list", seps}, {"quantity", q}, {"fit", o->fit}};
    out.metadata["fits"] = fits;
    out.metadata["tolerances"] = {{"pfaffian_antisymmetry", 1e-12}, {"power_law_residual", "log space"}};
    return out;
  };
  return cmd;
}

std::shared_ptr<Command> meanfield_command(CLI::App& root) {
  struct Opts {
    std::string g_spec;
    int d = 1;
    double T = 0.0;
    bool dominant_only = false;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_shared<Command>();
  cmd->name = "meanfield";
  cmd->app = root.add_subcommand("meanfield", "Saddle table with actions and stability");
  cmd->app->add_option("--g-list,--g-range", o->g_spec, "Fields")->required();
  cmd->app->add_option("--d", o->d, "Lattice dimension")->capture_default_str();
  cmd->app->add_option("--T", o->T, "Evolution time")->required();
  cmd->app->add_flag("--dominant-only", o->dominant_only, "One row per g: the saddle with the smallest Re S");
  cmd->run = [o](const RunContext& ctx) {
    CommandOutput out;
    const auto gs = parse_reals(o->g_spec, "--g-list");
    struct Result {
      std::vector<ctfim::SaddleSolution> saddles;
      std::string dominant;
      std::string ties;
    };
    auto results = sweep<Result>(out, ctx, gs.size(), [&](std::size_t i) {
      Result r;
      const auto dom = ctfim::dominant_saddle(gs[i], o->d, o->T);
      r.dominant = ctfim::to_string(dom.solution.class_tag);
      for (auto c : dom.tied_with) r.ties += (r.ties.empty() ? "" : ";") + std::string(ctfim::to_string(c));
      r.saddles = o->dominant_only ? std::vector{dom.solution} : ctfim::solve_saddles(gs[i], o->d, o->T);
      return r;
    });
    out.table.columns = {"g", "d", "T", "class", "phi0", "action_re", "action_im", "instability_frequency", "gap",
                         "dominant", "tied_with"};
    const double nan = std::nan("");
    for (std::size_t i = 0; i < gs.size(); ++i) {
      if (!results[i]) continue;
      for (const auto& s : results[i]->saddles) {
        out.table.rows.push_back({gs[i], static_cast<long>(o->d), o->T, std::string(ctfim::to_string(s.class_tag)), s.phi0,
                                  s.action_per_site.real(), s.action_per_site.imag(),
                                  s.stability.instability_frequency.value_or(nan), s.stability.gap.value_or(nan),
                                  results[i]->dominant, results[i]->ties});
      }
    }
    out.metadata["config"] = {{"g_values", gs}, {"d", o->d}, {"T", o->T}, {"dominant_only", o->dominant_only}};
    out.metadata["tolerances"] = {{"root_bisection", 1e-15}, {"tie", 1e-12}};
    return out;
  };
  return cmd;
}

std::shared_ptr<Command> qubit0d_command(CLI::App& root) {
  struct Opts {
    double g = 0.0, p = 1.0, t_max = 0.0, dt = 0.01;
  };
  auto o = std::make_shared<Opts>();
  auto cmd = std::make_shared<Command>();
  cmd->name = "qubit0d";
  cmd->app = root.add_subcommand("qubit0d", "Single-qubit benchmark series, columns T,value; rates in the JSON");
  cmd->app->add_option("--g", o->g, "Field")->required();
  cmd->app->add_option("--p", o->p, "Dissipation rate")->capture_default_str();
  cmd->app->add_option("--t-max", o->t_max, "Final time")->required();
  cmd->app->add_option("--dt-sample", o->dt, "Sample spacing")->capture_default_str();
  cmd->run = [o](const RunContext& ctx) {
    CommandOutput out;
    const auto t = time_grid(0.0, o->t_max, o->dt, "--dt-sample");
    auto values = sweep<double>(out, ctx, t.size(), [&](std::size_t i) {
      return ctfim::qubit0d_observable(ctfim::ModelParams::at_field(o->g, o->p, 1, t[i]));
    });
    out.table.columns = {"T", "value"};
    for (std::size_t i = 0; i < t.size(); ++i)
      if (values[i]) out.table.rows.push_back({t[i], *values[i]});
    out.metadata["config"] = {{"g", o->g}, {"p", o->p}, {"t_max", o->t_max}, {"dt_sample", o->dt}};
    if (o->g != 1.0) {
      const auto r = ctfim::qubit0d_rates(o->g, o->p);
      out.metadata["rates"] = {{"gamma", r.gamma}, {"omega", r.omega}};
    }
    return out;
  };
  return cmd;
}

}  // namespace

std::vector<std::shared_ptr<Command>> register_commands(CLI::App& root) {
  return {observable_command(root), oracle_command(root),      rates_command(root),    collapse_command(root),
          correlators_command(root), meanfield_command(root), qubit0d_command(root)};
}

}  // namespace lab
