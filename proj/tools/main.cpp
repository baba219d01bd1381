#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "l2control/dynamics.hpp"
#include "l2control/errors.hpp"
#include "l2control/game.hpp"
#include "l2control/gramian.hpp"
#include "l2control/null_control.hpp"
#include "l2control/report.hpp"
#include "l2control/scenario.hpp"
#include "l2control/version.hpp"

namespace {

using namespace l2control;
using nlohmann::ordered_json;

struct GlobalFlags {
  int quad_panels = 0;  // 0 = take the scenario's value
  int quad_nodes = 0;
  bool json = false;
  bool allow_dim1 = false;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

QuadratureSpec resolve_quadrature(const Scenario& s, const GlobalFlags& g) {
  const int ppu = g.quad_panels > 0 ? g.quad_panels : s.quad_panels_per_unit;
  const int nodes = g.quad_nodes > 0 ? g.quad_nodes : s.quad_nodes;
  return QuadratureSpec(ppu, nodes);
}

void emit(const RunReport& report, const GlobalFlags& g) {
  if (g.json)
    std::cout << report.to_json().dump(2) << "\n";
  else
    std::cout << report.to_text();
}

RunReport base_report(const std::string& command, const std::string& scenario_path,
                      const QuadratureSpec& quad) {
  RunReport r;
  r.command = command;
  r.tool_version = kVersion;
  r.parameters["scenario"] = scenario_path;
  r.parameters["quad_panels_per_unit"] = quad.panels_per_unit();
  r.parameters["quad_nodes"] = quad.nodes();
  return r;
}

std::vector<double> sample_times(double t_final, int samples) {
  if (samples < 1) throw InvalidInput("samples must be >= 1");
  std::vector<double> times;
  times.reserve(samples);
  if (samples == 1) {
    times.push_back(t_final);
    return times;
  }
  for (int k = 0; k < samples; ++k)
    times.push_back(t_final * static_cast<double>(k) / (samples - 1));
  return times;
}

std::vector<TrajectoryRow> sample_trajectory(const BlockSystem& system, const BlockVector& x0,
                                             const ControlSignal& w,
                                             const std::vector<double>& times,
                                             const QuadratureSpec& quad, bool per_block) {
  std::vector<TrajectoryRow> rows;
  rows.reserve(times.size());
  for (double t : times) {
    const BlockVector x = propagate(system, x0, w, t, quad);
    TrajectoryRow row;
    row.t = t;
    row.total_norm = x.total_norm();
    if (per_block) {
      row.block_norms.reserve(x.block_count());
      for (int i = 0; i < x.block_count(); ++i) row.block_norms.push_back(x.part(i).norm());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Piecewise-constant control file:
//   {"grid": [0, t1, ..., T], "values": [[block vals...] per interval]}
ControlSignal load_control_file(const std::string& path, const BlockSystem& system) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open control file " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InvalidInput("control file " + path + ": malformed JSON");
  if (!j.is_object() || !j.contains("grid") || !j.contains("values") || !j["grid"].is_array() ||
      !j["values"].is_array())
    throw InvalidInput("control file needs arrays 'grid' and 'values'");

  std::vector<double> grid;
  for (const auto& g : j["grid"]) {
    if (!g.is_number()) throw InvalidInput("control file: grid entries must be numbers");
    grid.push_back(g.get<double>());
  }
  std::vector<BlockVector> values;
  for (const auto& interval : j["values"]) {
    if (!interval.is_array() || interval.size() != static_cast<std::size_t>(system.block_count()))
      throw InvalidInput("control file: each interval needs one value list per block");
    std::vector<Vec> parts;
    for (int i = 0; i < system.block_count(); ++i) {
      const auto& jv = interval[i];
      if (!jv.is_array() || jv.size() != static_cast<std::size_t>(system.dims()[i]))
        throw InvalidInput("control file: block " + std::to_string(i) + " values must have dim " +
                           std::to_string(system.dims()[i]));
      Vec v(system.dims()[i]);
      for (int k = 0; k < system.dims()[i]; ++k) {
        if (!jv[k].is_number())
          throw InvalidInput("control file: block values must be numbers");
        v(k) = jv[k].get<double>();
      }
      parts.push_back(std::move(v));
    }
    values.emplace_back(std::move(parts));
  }
  return ControlSignal::piecewise_constant(std::move(grid), std::move(values));
}

int run_check(const std::string& path, double tau, const GlobalFlags& g) {
  Timer timer;
  const Scenario s = parse_scenario(path, g.allow_dim1);
  const BlockSystem system = s.make_system(g.allow_dim1);
  const BlockVector x0 = s.make_x0();
  check_same_shape(system, x0);
  const QuadratureSpec quad = resolve_quadrature(s, g);

  RunReport r = base_report("check", path, quad);
  r.parameters["tau"] = tau;

  const BlockGramian gramian = assemble_gramian(system, tau, quad);
  const WInvBoundReport bound = w_inv_bound_check(system, gramian);

  ordered_json abscissae = ordered_json::array();
  for (const BlockMatrix& b : system.blocks()) abscissae.push_back(b.spectral_abscissa());
  ordered_json rows = ordered_json::array();
  for (const WInvBoundRow& row : bound.rows)
    rows.push_back({{"block", row.block},
                    {"beta", row.beta},
                    {"conditioning", row.conditioning},
                    {"w_inv_norm", row.measured},
                    {"decay_bound", row.bound},
                    {"within", row.within}});

  r.results["block_count"] = system.block_count();
  r.results["dims"] = system.dims();
  r.results["min_decay_rate"] = system.min_decay_rate();
  r.results["initial_norm"] = x0.total_norm();
  r.results["tail_bound"] = x0.tail_bound();
  r.results["constraint"] = s.constraint.kind == Constraint::Kind::Theta
                                ? ordered_json{{"theta", s.constraint.theta}}
                                : ordered_json{{"rho", s.constraint.rho},
                                               {"sigma", s.constraint.sigma}};
  r.results["spectral_abscissae"] = std::move(abscissae);
  r.results["w_inv_decay_bound"] = std::move(rows);
  r.results["w_inv_all_within"] = bound.all_within;
  r.wall_time_ms = timer.ms();
  emit(r, g);
  return 0;
}

int run_simulate(const std::string& path, double t_final, int samples,
                 const std::string& control, bool per_block, const std::string& out,
                 const GlobalFlags& g) {
  Timer timer;
  if (!(t_final >= 0.0)) throw InvalidInput("t-final must be >= 0");
  const Scenario s = parse_scenario(path, g.allow_dim1);
  const BlockSystem system = s.make_system(g.allow_dim1);
  const BlockVector x0 = s.make_x0();
  const QuadratureSpec quad = resolve_quadrature(s, g);

  ControlSignal w = control == "zero" ? ControlSignal::zero(system.dims(), t_final)
                                      : load_control_file(control, system);
  if (w.horizon() < t_final)
    throw InvalidHorizon("control horizon " + format_full(w.horizon()) +
                         " is shorter than t-final " + format_full(t_final));

  const std::vector<TrajectoryRow> rows =
      sample_trajectory(system, x0, w, sample_times(t_final, samples), quad, per_block);
  const std::string csv = trajectory_csv(rows, per_block);

  if (!out.empty()) write_text_file(out, csv);

  if (g.json) {
    RunReport r = base_report("simulate", path, quad);
    r.parameters["t_final"] = t_final;
    r.parameters["samples"] = samples;
    r.parameters["control"] = control;
    r.parameters["per_block"] = per_block;
    if (!out.empty()) r.parameters["out"] = out;
    ordered_json traj = ordered_json::array();
    for (const TrajectoryRow& row : rows) {
      ordered_json jr = ordered_json::array({row.t, row.total_norm});
      for (double bn : row.block_norms) jr.push_back(bn);
      traj.push_back(std::move(jr));
    }
    r.results["initial_norm"] = rows.front().total_norm;
    r.results["final_norm"] = rows.back().total_norm;
    r.results["trajectory"] = std::move(traj);
    r.wall_time_ms = timer.ms();
    emit(r, g);
  } else if (out.empty()) {
    std::cout << csv;
  }
  return 0;
}

int run_optimal_time(const std::string& path, double tol, const GlobalFlags& g) {
  Timer timer;
  const Scenario s = parse_scenario(path, g.allow_dim1);
  if (s.constraint.kind != Constraint::Kind::Theta)
    throw InvalidInput("optimal-time needs a theta constraint, this scenario has rho/sigma");
  const BlockSystem system = s.make_system(g.allow_dim1);
  const BlockVector x0 = s.make_x0();
  const QuadratureSpec quad = resolve_quadrature(s, g);

  const double vartheta = optimal_time(system, x0, s.constraint.theta, quad, tol);

  RunReport r = base_report("optimal-time", path, quad);
  r.parameters["theta"] = s.constraint.theta;
  r.parameters["tol"] = tol;
  r.results["vartheta"] = vartheta;
  r.results["initial_norm"] = x0.total_norm();
  r.results["tail_bound"] = x0.tail_bound();
  r.wall_time_ms = timer.ms();
  if (!g.json) std::cout << format_full(vartheta) << "\n";
  emit(r, g);
  return 0;
}

int run_null_control(const std::string& path, const std::string& tau_arg, const std::string& out,
                     int samples, double tol, const GlobalFlags& g) {
  Timer timer;
  const Scenario s = parse_scenario(path, g.allow_dim1);
  const BlockSystem system = s.make_system(g.allow_dim1);
  const BlockVector x0 = s.make_x0();
  const QuadratureSpec quad = resolve_quadrature(s, g);

  double tau = 0.0;
  if (tau_arg == "optimal") {
    if (s.constraint.kind != Constraint::Kind::Theta)
      throw InvalidInput("--tau optimal needs a theta constraint");
    tau = optimal_time(system, x0, s.constraint.theta, quad, tol);
  } else {
    try {
      std::size_t used = 0;
      tau = std::stod(tau_arg, &used);
      if (used != tau_arg.size()) throw std::invalid_argument(tau_arg);
    } catch (const std::exception&) {
      throw InvalidInput("--tau expects a number or 'optimal', got '" + tau_arg + "'");
    }
  }

  const NullControl u0 = null_control(system, x0, tau, quad);
  const ControlSignal w = u0.signal();
  const double quad_energy = l2_energy(w, quad);

  const std::vector<TrajectoryRow> rows =
      sample_trajectory(system, x0, w, sample_times(tau, samples), quad, false);

  RunReport r = base_report("null-control", path, quad);
  r.parameters["tau"] = tau_arg;
  r.parameters["samples"] = samples;
  if (!out.empty()) r.parameters["out"] = out;
  r.results["tau"] = tau;
  r.results["energy"] = u0.energy();
  r.results["quadrature_energy"] = quad_energy;
  if (s.constraint.kind == Constraint::Kind::Theta) {
    r.results["theta_squared"] = s.constraint.theta * s.constraint.theta;
    r.results["admissible"] =
        quad_energy <= s.constraint.theta * s.constraint.theta + 1e-9;
  }
  r.results["initial_norm"] = x0.total_norm();
  {
    const BlockVector xf = propagate(system, x0, w, tau, quad);
    r.results["final_retained_norm"] = xf.retained_norm();
    r.results["final_total_norm"] = xf.total_norm();
  }
  r.wall_time_ms = timer.ms();

  if (!out.empty()) write_text_file(out, trajectory_csv(rows, false));
  emit(r, g);
  return 0;
}

int run_pursuit(const std::string& path, const std::string& evader_name, std::uint64_t seed,
                const std::string& out, int samples, double tol, const GlobalFlags& g) {
  Timer timer;
  const Scenario s = parse_scenario(path, g.allow_dim1);
  if (s.constraint.kind != Constraint::Kind::Game)
    throw InvalidInput("pursuit needs a rho/sigma constraint, this scenario has theta");
  const BlockSystem system = s.make_system(g.allow_dim1);
  const BlockVector x0 = s.make_x0();
  const QuadratureSpec quad = resolve_quadrature(s, g);

  const GameConfig config(system, x0, s.constraint.rho, s.constraint.sigma);
  const EvaderStrategy evader = EvaderStrategy::from_name(evader_name, seed);
  const GameResult result = play_game(config, evader, quad, samples, tol);

  RunReport r = base_report("pursuit", path, quad);
  r.parameters["evader"] = evader_name;
  r.parameters["seed"] = seed;
  r.parameters["rho"] = s.constraint.rho;
  r.parameters["sigma"] = s.constraint.sigma;
  r.parameters["samples"] = samples;
  if (!out.empty()) r.parameters["out"] = out;
  r.results["vartheta1"] = result.vartheta1;
  r.results["capture_norm"] = result.capture_norm;
  r.results["initial_norm"] = x0.total_norm();
  r.results["pursuer_energy"] = result.pursuer_energy;
  r.results["evader_energy"] = result.evader_energy;
  r.results["pursuer_admissible"] = result.pursuer_admissible;
  r.results["evader_admissible"] = result.evader_admissible;
  r.wall_time_ms = timer.ms();

  if (!out.empty()) {
    std::vector<TrajectoryRow> rows;
    rows.reserve(result.trajectory.size());
    for (const auto& [t, norm] : result.trajectory) rows.push_back({t, norm, {}});
    write_text_file(out, trajectory_csv(rows, false));
  }
  emit(r, g);
  return 0;
}

int run_generate(const GeneratorParams& params, const std::string& out, const GlobalFlags& g) {
  Timer timer;
  const Scenario s = generate_scenario(params);
  write_scenario(s, out);

  RunReport r;
  r.command = "generate";
  r.tool_version = kVersion;
  r.parameters["out"] = out;
  r.parameters["n_blocks"] = params.n_blocks;
  r.parameters["dim_min"] = params.dim_min;
  r.parameters["dim_max"] = params.dim_max;
  r.parameters["abscissa_lo"] = params.abscissa_lo;
  r.parameters["abscissa_hi"] = params.abscissa_hi;
  r.parameters["decay_exponent"] = params.decay_exponent;
  r.parameters["seed"] = params.seed;
  r.results["tail_bound"] = s.tail_bound;
  r.results["block_count"] = static_cast<int>(s.blocks.size());
  r.wall_time_ms = timer.ms();
  emit(r, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive control for block-diagonal stable linear systems"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--quad-panels", g.quad_panels, "Quadrature panels per unit time (overrides scenario)");
  app.add_option("--quad-nodes", g.quad_nodes, "Gauss-Legendre nodes per panel (overrides scenario)");
  app.add_flag("--json", g.json, "Emit the run report as JSON on stdout");
  app.add_flag("--allow-dim1", g.allow_dim1, "Accept scalar blocks");

  std::string scenario_path;
  double check_tau = 1.0;
  auto* check = app.add_subcommand("check", "Validate a scenario and report diagnostics");
  check->fallthrough();
  check->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  check->add_option("--tau", check_tau, "Horizon for the Gramian decay diagnostic");

  double t_final = 1.0;
  int samples = 33;
  std::string control = "zero";
  bool per_block = false;
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "Sample a trajectory to CSV");
  simulate->fallthrough();
  simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  simulate->add_option("--t-final", t_final, "Final time")->required();
  simulate->add_option("--samples", samples, "Number of sample times");
  simulate->add_option("--control", control, "'zero' or a piecewise-constant control JSON file");
  simulate->add_flag("--per-block", per_block, "Add per-block norm columns");
  simulate->add_option("--out", out_path, "Write the CSV here instead of stdout");

  double tol = 1e-10;
  auto* optimal = app.add_subcommand("optimal-time", "Solve the optimal translation time");
  optimal->fallthrough();
  optimal->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  optimal->add_option("--tol", tol, "Relative tolerance on the cost equation");

  std::string tau_arg;
  auto* nullc = app.add_subcommand("null-control", "Synthesize the minimum-energy steering control");
  nullc->fallthrough();
  nullc->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  nullc->add_option("--tau", tau_arg, "Steering horizon, a number or 'optimal'")->required();
  nullc->add_option("--out", out_path, "Trajectory CSV path");
  nullc->add_option("--samples", samples, "Trajectory sample count");
  nullc->add_option("--tol", tol, "Tolerance for --tau optimal");

  std::string evader_name = "zero";
  std::uint64_t seed = 0;
  auto* pursuit = app.add_subcommand("pursuit", "Play the guaranteed pursuit game");
  pursuit->fallthrough();
  pursuit->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  pursuit->add_option("--evader", evader_name, "zero|constant|sinusoid|greedy|random");
  pursuit->add_option("--seed", seed, "Evader seed");
  pursuit->add_option("--out", out_path, "Match trajectory CSV path");
  pursuit->add_option("--samples", samples, "Trajectory sample count");
  pursuit->add_option("--tol", tol, "Tolerance for the pursuit horizon");

  GeneratorParams gp;
  double gen_theta = 1.0, gen_rho = 0.0, gen_sigma = 0.0;
  auto* generate = app.add_subcommand("generate", "Write a deterministic random scenario");
  generate->fallthrough();
  generate->add_option("--out", out_path, "Scenario JSON destination")->required();
  generate->add_option("--n-blocks", gp.n_blocks, "Number of retained blocks");
  generate->add_option("--dim-min", gp.dim_min, "Smallest block dimension");
  generate->add_option("--dim-max", gp.dim_max, "Largest block dimension");
  generate->add_option("--abscissa-lo", gp.abscissa_lo, "Eigenvalue real-part lower end");
  generate->add_option("--abscissa-hi", gp.abscissa_hi, "Eigenvalue real-part upper end");
  generate->add_option("--decay-exponent", gp.decay_exponent, "p in |x0_i| = i^-p (needs p > 1/2)");
  generate->add_option("--seed", gp.seed, "Generator seed");
  generate->add_option("--theta", gen_theta, "Steering budget constraint");
  auto* rho_opt = generate->add_option("--rho", gen_rho, "Pursuer budget (game constraint)");
  auto* sigma_opt = generate->add_option("--sigma", gen_sigma, "Evader budget (game constraint)");
  rho_opt->needs(sigma_opt);
  sigma_opt->needs(rho_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return run_check(scenario_path, check_tau, g);
    if (simulate->parsed())
      return run_simulate(scenario_path, t_final, samples, control, per_block, out_path, g);
    if (optimal->parsed()) return run_optimal_time(scenario_path, tol, g);
    if (nullc->parsed())
      return run_null_control(scenario_path, tau_arg, out_path, samples, tol, g);
    if (pursuit->parsed())
      return run_pursuit(scenario_path, evader_name, seed, out_path, samples, tol, g);
    if (generate->parsed()) {
      if (rho_opt->count() > 0)
        gp.constraint = Constraint{Constraint::Kind::Game, 0.0, gen_rho, gen_sigma};
      else
        gp.constraint = Constraint{Constraint::Kind::Theta, gen_theta, 0.0, 0.0};
      return run_generate(gp, out_path, g);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
