#include "netduopoly/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netduopoly/analysis.hpp"
#include "netduopoly/best_response.hpp"
#include "netduopoly/dynamics.hpp"
#include "netduopoly/equilibrium.hpp"
#include "netduopoly/errors.hpp"
#include "netduopoly/graph.hpp"
#include "netduopoly/io.hpp"

namespace netduopoly {
namespace {

struct SolverFlags {
  double tolerance = 1e-9;
  double damping = 0.5;
  int max_iters = 10000;
  std::string init = "uba";
  std::uint64_t seed = kDefaultSeed;
  bool no_adaptive = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--tol", flags.tolerance, "Fixed-point residual tolerance")
      ->capture_default_str();
  cmd->add_option("--damping", flags.damping, "Initial damping theta in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--max-iters", flags.max_iters, "Iteration limit")->capture_default_str();
  cmd->add_option("--init", flags.init, "uba | zero | random | path to a profile JSON")
      ->capture_default_str();
  cmd->add_option("--seed", flags.seed, "Seed for --init random")->capture_default_str();
  cmd->add_flag("--no-adaptive", flags.no_adaptive, "Keep the damping fixed");
}

SolverConfig solver_config(const SolverFlags& flags) {
  SolverConfig config;
  config.tolerance = flags.tolerance;
  config.damping = flags.damping;
  config.max_iters = flags.max_iters;
  config.seed = flags.seed;
  config.adaptive_damping = !flags.no_adaptive;
  if (flags.init == "uba") {
    config.init_scheme = InitScheme::kUniform;
  } else if (flags.init == "zero") {
    config.init_scheme = InitScheme::kZero;
  } else if (flags.init == "random") {
    config.init_scheme = InitScheme::kRandom;
  } else {
    config.init = parse_profile(read_json_file(flags.init));
  }
  return config;
}

void echo_solver(RunMetadata& meta, const SolverFlags& flags) {
  meta.add("tol", flags.tolerance);
  meta.add("damping", flags.damping);
  meta.add("max_iters", std::to_string(flags.max_iters));
  meta.add("init", flags.init);
  meta.add("seed", std::to_string(flags.seed));
  meta.add("adaptive_damping", flags.no_adaptive ? "false" : "true");
}

void echo_spec(RunMetadata& meta, const std::string& path, const LoadedSpec& loaded) {
  meta.add("spec", path);
  meta.add("n_agents", std::to_string(loaded.spec.n_agents()));
  if (loaded.graph_file) meta.add("graph_file", loaded.graph_file->string());
  if (loaded.horizon) meta.add("T", *loaded.horizon);
  for (const Firm f : {Firm::kOne, Firm::kTwo}) {
    const auto& p = loaded.spec.firm(f);
    const std::string prefix = "firm" + std::to_string(firm_number(f)) + ".";
    meta.add(prefix + "gamma", p.gamma);
    meta.add(prefix + "lambda", p.lambda);
    meta.add(prefix + "B", p.budget);
    meta.add(prefix + "b", p.cap);
  }
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::filesystem::path path = out_path;
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0' &&
                                                   path.is_relative()) {
    path = std::filesystem::path(dir) / path;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw ValidationError("cannot write output file '" + path.string() + "'");
  }
  file << text;
}

std::vector<double> parse_fractions(const std::string& text) {
  std::vector<double> values;
  const auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) {
      throw ValidationError("--fractions: bad number '" + s + "'");
    }
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) {
      throw ValidationError("--fractions: range must be start:stop:step");
    }
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw ValidationError("--fractions: need step > 0 and stop >= start");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= count; ++k) values.push_back(start + static_cast<double>(k) * step);
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) values.push_back(number(part));
  }
  if (values.empty()) {
    throw ValidationError("--fractions: no values");
  }
  return values;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ",";
    out += format_number(values[k], 17);
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-firm marketing game over a social network: influence power, "
               "best responses, Nash equilibrium and gain of targeting."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string out_path;
  std::string graph_path;
  std::string spec_path;
  std::string format = "csv";
  double horizon = kDefaultHorizon;
  std::optional<std::size_t> n_agents;
  SolverFlags solver;

  // aip
  auto* aip_cmd = app.add_subcommand("aip", "Agent influence power of a graph");
  aip_cmd->add_option("--graph", graph_path, "Graph CSV or JSON")->required();
  aip_cmd->add_option("--n", n_agents, "Agent count (default: largest index)");
  aip_cmd->add_option("--T", horizon, "Horizon T")->capture_default_str();
  aip_cmd->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  aip_cmd->add_option("--out", out_path, "Output file");

  // br
  int firm_id = 1;
  std::string opponent_path;
  std::optional<double> horizon_override;
  auto* br_cmd = app.add_subcommand("br", "Best response of one firm");
  br_cmd->add_option("--spec", spec_path, "GameSpec JSON")->required();
  br_cmd->add_option("--firm", firm_id, "Responding firm (1 or 2)")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  br_cmd->add_option("--opponent", opponent_path,
                     "Opponent action: JSON array, {\"action\": [...]} or a profile "
                     "(default: uniform allocation)");
  br_cmd->add_option("--T", horizon_override, "Override the spec's horizon");
  br_cmd->add_option("--out", out_path, "Output file");

  // ne
  std::string verify_path;
  auto* ne_cmd = app.add_subcommand("ne", "Nash equilibrium by damped best-response iteration");
  ne_cmd->add_option("--spec", spec_path, "GameSpec JSON")->required();
  add_solver_flags(ne_cmd, solver);
  ne_cmd->add_option("--verify", verify_path,
                     "Check the profile in this file (e.g. earlier ne output) instead of solving");
  ne_cmd->add_option("--T", horizon_override, "Override the spec's horizon");
  ne_cmd->add_option("--out", out_path, "Output file");

  // simulate
  std::string profile_path;
  std::optional<std::size_t> steps;
  auto* sim_cmd = app.add_subcommand("simulate", "Opinion trajectory after the campaign");
  sim_cmd->add_option("--spec", spec_path, "GameSpec JSON (x0 and firm parameters)")->required();
  sim_cmd->add_option("--graph", graph_path, "Graph file (default: the spec's graph_file)");
  sim_cmd->add_option("--profile", profile_path, "Action profile JSON (default: no spend)");
  sim_cmd->add_option("--T", horizon_override, "Horizon (default: spec's T, else 10)");
  sim_cmd->add_option("--steps", steps, "RK4 steps (default: max(1000, ceil(100 T |L|_inf)))");
  sim_cmd->add_option("--out", out_path, "Output file");

  // got-sweep
  std::vector<double> leader_aips = {1, 2, 5, 10, 20, 50};
  std::string fractions_text = "0.01:1:0.01";
  SweepParams sweep;
  auto* sweep_cmd = app.add_subcommand("got-sweep", "Gain of targeting over leader configurations");
  sweep_cmd->add_option("--C", leader_aips, "Leader AIP values, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--fractions", fractions_text, "start:stop:step or a comma list")
      ->capture_default_str();
  sweep_cmd->add_option("--N", sweep.n_agents, "Agents")->capture_default_str();
  sweep_cmd->add_option("--x0", sweep.x0_value, "Common initial opinion")->capture_default_str();
  double gamma = 1.0, lambda = 0.1, budget = 10.0, cap = 10.0;
  sweep_cmd->add_option("--gamma", gamma, "Revenue factor, both firms")->capture_default_str();
  sweep_cmd->add_option("--lambda", lambda, "Cost factor, both firms")->capture_default_str();
  sweep_cmd->add_option("--B", budget, "Budget, both firms")->capture_default_str();
  sweep_cmd->add_option("--b", cap, "Per-agent cap, both firms")->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "Output file");

  // report
  auto* report_cmd = app.add_subcommand("report", "Per-agent allocations at the equilibrium");
  report_cmd->add_option("--spec", spec_path, "GameSpec JSON")->required();
  add_solver_flags(report_cmd, solver);
  report_cmd->add_option("--T", horizon_override, "Override the spec's horizon");
  report_cmd->add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  report_cmd->add_option("--out", out_path, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (aip_cmd->parsed()) {
      const auto graph = load_graph(graph_path, n_agents);
      const auto aip = compute_aip(build_laplacian(graph), horizon);
      RunMetadata meta("aip");
      meta.add("graph", graph_path);
      meta.add("n_agents", std::to_string(graph.n_agents()));
      meta.add("T", horizon);
      if (format == "json") {
        Json doc{{"meta", meta.json()}, {"T", horizon}, {"rho", to_json(aip.rho)}};
        emit(dump_json(doc), out_path, out);
      } else {
        emit(aip_csv(aip, meta), out_path, out);
      }
      return kExitOk;
    }

    if (br_cmd->parsed()) {
      const auto loaded = load_game_spec(spec_path, horizon_override);
      const Firm firm = firm_from_number(firm_id);
      Eigen::VectorXd opponent;
      if (opponent_path.empty()) {
        opponent = uba_action(loaded.spec, rival(firm));
      } else {
        const Json doc = read_json_file(opponent_path);
        if (doc.is_object() && (doc.contains("profile") || doc.contains("a1"))) {
          opponent = parse_profile(doc).of(rival(firm));
        } else {
          opponent = parse_action(doc);
        }
      }
      const auto br = best_response(firm, loaded.spec, opponent);
      RunMetadata meta("br");
      echo_spec(meta, spec_path, loaded);
      meta.add("firm", std::to_string(firm_id));
      meta.add("opponent", opponent_path.empty() ? "uba" : opponent_path);
      Json doc{{"meta", meta.json()}};
      doc.update(to_json(br));
      doc["kkt_residual"] = kkt_residual(firm, loaded.spec, opponent, br);
      doc["opponent_action"] = to_json(opponent);
      emit(dump_json(doc), out_path, out);
      return kExitOk;
    }

    if (ne_cmd->parsed()) {
      const auto loaded = load_game_spec(spec_path, horizon_override);
      RunMetadata meta(verify_path.empty() ? "ne" : "ne --verify");
      echo_spec(meta, spec_path, loaded);
      echo_solver(meta, solver);
      if (!verify_path.empty()) {
        meta.add("verify", verify_path);
        const auto profile = parse_profile(read_json_file(verify_path));
        const auto check = verify_ne(loaded.spec, profile, solver.tolerance);
        Json doc{{"meta", meta.json()}};
        doc.update(to_json(check));
        emit(dump_json(doc), out_path, out);
        if (!check.is_ne) {
          err << "netduopoly: profile is not an equilibrium (residual "
              << format_number(check.residual, 9) << ")\n";
          return kExitNotNe;
        }
        return kExitOk;
      }
      const auto result = solve_ne(loaded.spec, solver_config(solver));
      Json doc{{"meta", meta.json()}};
      doc.update(to_json(result));
      emit(dump_json(doc), out_path, out);
      if (!result.converged) {
        err << "netduopoly: no convergence after " << result.iterations
            << " iterations (residual " << format_number(result.residual, 9) << ")\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }

    if (sim_cmd->parsed()) {
      const auto loaded = load_game_spec(spec_path, horizon_override);
      std::filesystem::path gpath = graph_path;
      if (gpath.empty()) {
        if (!loaded.graph_file) {
          throw ValidationError("simulate: no --graph given and the spec has no graph_file");
        }
        gpath = *loaded.graph_file;
      }
      const double t_end = horizon_override.value_or(loaded.horizon.value_or(kDefaultHorizon));
      const auto graph = load_graph(gpath, loaded.spec.n_agents());
      const ActionProfile profile = profile_path.empty()
                                        ? ActionProfile::zeros(loaded.spec.n_agents())
                                        : parse_profile(read_json_file(profile_path));
      validate_profile(loaded.spec, profile);
      const Laplacian l = build_laplacian(graph);
      const std::size_t n_steps = steps.value_or(default_steps(l, t_end));
      const auto traj = simulate_opinions(l, apply_campaign(loaded.spec.x0(), profile), t_end, n_steps);

      RunMetadata meta("simulate");
      echo_spec(meta, spec_path, loaded);
      meta.add("graph", gpath.string());
      meta.add("T", t_end);
      meta.add("steps", std::to_string(n_steps));
      meta.add("profile", profile_path.empty() ? "zero" : profile_path);
      meta.add("x0_plus_clip", "[1e-9, 1-1e-9]");
      const double mass = traj.states.back().sum();
      const double n = static_cast<double>(loaded.spec.n_agents());
      meta.add("u1_realized",
               loaded.spec.firm1().gamma * mass - loaded.spec.firm1().lambda * profile.a1.sum());
      meta.add("u2_realized", loaded.spec.firm2().gamma * (n - mass) -
                                  loaded.spec.firm2().lambda * profile.a2.sum());
      emit(trajectory_csv(traj, meta), out_path, out);
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      sweep.firm1 = FirmParams{gamma, lambda, budget, cap};
      sweep.firm2 = sweep.firm1;
      sweep.firm1.validate();
      const auto fractions = parse_fractions(fractions_text);
      const auto result = leader_sweep(sweep, leader_aips, fractions);
      RunMetadata meta("got-sweep");
      meta.add("N", std::to_string(sweep.n_agents));
      meta.add("x0", sweep.x0_value);
      meta.add("gamma", gamma);
      meta.add("lambda", lambda);
      meta.add("B", budget);
      meta.add("b", cap);
      meta.add("C", join(leader_aips));
      meta.add("fractions", fractions_text);
      meta.add("leader_count", "floor(fraction*N)");
      meta.add("uba_clipped_to_cap", result.uba_clipped ? "true" : "false");
      emit(sweep_csv(result, meta), out_path, out);
      return kExitOk;
    }

    if (report_cmd->parsed()) {
      const auto loaded = load_game_spec(spec_path, horizon_override);
      const auto report = ne_report(loaded.spec, solver_config(solver));
      const auto& eq = report.equilibrium;
      RunMetadata meta("report");
      echo_spec(meta, spec_path, loaded);
      echo_solver(meta, solver);
      meta.add("converged", eq.converged ? "true" : "false");
      meta.add("residual", eq.residual);
      meta.add("iterations", std::to_string(eq.iterations));
      meta.add("mu0_firm1", eq.mu0[0]);
      meta.add("mu0_firm2", eq.mu0[1]);
      meta.add("u1", eq.utilities[0]);
      meta.add("u2", eq.utilities[1]);
      if (format == "json") {
        Json rows = Json::array();
        for (const auto& r : report.rows) {
          rows.push_back(Json{{"agent", r.agent}, {"rho", r.rho}, {"x0", r.x0}, {"a1", r.a1},
                              {"a2", r.a2}, {"regime", std::string(regime_name(r.regime))}});
        }
        emit(dump_json(Json{{"meta", meta.json()}, {"rows", rows}}), out_path, out);
      } else {
        emit(report_csv(report, meta), out_path, out);
      }
      if (!eq.converged) {
        err << "netduopoly: no convergence after " << eq.iterations << " iterations\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "netduopoly: error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace netduopoly
