#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>
#include <vector>

#include "netduopoly/analysis.hpp"
#include "netduopoly/best_response.hpp"
#include "netduopoly/dynamics.hpp"
#include "netduopoly/equilibrium.hpp"
#include "netduopoly/errors.hpp"
#include "netduopoly/game.hpp"
#include "netduopoly/graph.hpp"
#include "netduopoly/io.hpp"
#include "netduopoly/matrix_exp.hpp"

namespace py = pybind11;
using namespace netduopoly;

namespace {

SocialGraph make_graph(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& [s, t, w] : edges) out.push_back({s, t, w});
  return SocialGraph(n, std::move(out));
}

}  // namespace

PYBIND11_MODULE(_netduopoly, m) {
  m.doc() = "Two-firm marketing game over a social network.";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<SingularPricingError>(m, "SingularPricingError", PyExc_ArithmeticError);
  py::register_exception<InfeasiblePartitionError>(m, "InfeasiblePartitionError",
                                                   PyExc_ArithmeticError);
  py::register_exception<UndefinedGainError>(m, "UndefinedGainError", PyExc_ArithmeticError);

  // graph
  m.def("matrix_exponential", &matrix_exponential, py::arg("m"), py::arg("t") = 1.0);
  m.def(
      "build_laplacian",
      [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
        return build_laplacian(make_graph(n, edges)).matrix();
      },
      py::arg("n_agents"), py::arg("edges"),
      "Dense Laplacian from 1-based (source, target, weight) edges.");
  m.def(
      "compute_aip",
      [](const Eigen::MatrixXd& laplacian, double horizon) {
        return compute_aip(Laplacian(laplacian), horizon).rho;
      },
      py::arg("laplacian"), py::arg("T") = kDefaultHorizon);
  m.def(
      "load_graph_laplacian",
      [](const std::string& path) { return build_laplacian(load_graph(path)).matrix(); },
      py::arg("path"));

  // game
  py::class_<FirmParams>(m, "FirmParams")
      .def(py::init([](double gamma, double lambda, double budget, double cap) {
             FirmParams f{gamma, lambda, budget, cap};
             f.validate();
             return f;
           }),
           py::arg("gamma") = 1.0, py::arg("lambda_") = 0.1, py::arg("budget") = 10.0,
           py::arg("cap") = 10.0)
      .def_readwrite("gamma", &FirmParams::gamma)
      .def_readwrite("lambda_", &FirmParams::lambda)
      .def_readwrite("budget", &FirmParams::budget)
      .def_readwrite("cap", &FirmParams::cap);

  py::class_<GameSpec>(m, "GameSpec")
      .def(py::init<Eigen::VectorXd, Eigen::VectorXd, FirmParams, FirmParams>(), py::arg("rho"),
           py::arg("x0"), py::arg("firm1"), py::arg("firm2"))
      .def_property_readonly("n_agents", &GameSpec::n_agents)
      .def_property_readonly("rho", &GameSpec::rho)
      .def_property_readonly("x0", &GameSpec::x0)
      .def_property_readonly("firm1", &GameSpec::firm1)
      .def_property_readonly("firm2", &GameSpec::firm2)
      .def_static(
          "from_json_file", [](const std::string& path) { return load_game_spec(path).spec; },
          py::arg("path"));

  py::class_<ActionProfile>(m, "ActionProfile")
      .def(py::init([](Eigen::VectorXd a1, Eigen::VectorXd a2) {
             return ActionProfile{std::move(a1), std::move(a2)};
           }),
           py::arg("a1"), py::arg("a2"))
      .def_readwrite("a1", &ActionProfile::a1)
      .def_readwrite("a2", &ActionProfile::a2);

  m.def("campaign_update", &campaign_update, py::arg("x0"), py::arg("a1"), py::arg("a2"));
  m.def(
      "utility",
      [](int firm, const GameSpec& spec, const ActionProfile& p) {
        return utility(firm_from_number(firm), spec, p);
      },
      py::arg("firm"), py::arg("spec"), py::arg("profile"));
  m.def(
      "utility_gradient",
      [](int firm, const GameSpec& spec, const ActionProfile& p) {
        return utility_gradient(firm_from_number(firm), spec, p);
      },
      py::arg("firm"), py::arg("spec"), py::arg("profile"));

  // best response
  py::class_<BestResponseResult>(m, "BestResponseResult")
      .def_readonly("action", &BestResponseResult::action)
      .def_readonly("mu0", &BestResponseResult::mu0)
      .def_readonly("zero_set", &BestResponseResult::zero_set)
      .def_readonly("cap_set", &BestResponseResult::cap_set)
      .def_readonly("interior_set", &BestResponseResult::interior_set)
      .def_readonly("utility", &BestResponseResult::utility);
  m.def(
      "best_response",
      [](int firm, const GameSpec& spec, const Eigen::VectorXd& opponent) {
        return best_response(firm_from_number(firm), spec, opponent);
      },
      py::arg("firm"), py::arg("spec"), py::arg("opponent"));

  // equilibrium
  py::class_<EquilibriumResult>(m, "EquilibriumResult")
      .def_readonly("profile", &EquilibriumResult::profile)
      .def_readonly("utilities", &EquilibriumResult::utilities)
      .def_readonly("mu0", &EquilibriumResult::mu0)
      .def_readonly("residual", &EquilibriumResult::residual)
      .def_readonly("iterations", &EquilibriumResult::iterations)
      .def_readonly("converged", &EquilibriumResult::converged)
      .def_property_readonly("regime", [](const EquilibriumResult& r) {
        std::vector<std::string> out;
        for (const auto g : r.regime) out.emplace_back(regime_name(g));
        return out;
      });
  m.def(
      "solve_ne",
      [](const GameSpec& spec, double tol, double damping, int max_iters, const std::string& init,
         std::uint64_t seed) {
        SolverConfig c;
        c.tolerance = tol;
        c.damping = damping;
        c.max_iters = max_iters;
        c.seed = seed;
        if (init == "uba") {
          c.init_scheme = InitScheme::kUniform;
        } else if (init == "zero") {
          c.init_scheme = InitScheme::kZero;
        } else if (init == "random") {
          c.init_scheme = InitScheme::kRandom;
        } else {
          throw ValidationError("init must be 'uba', 'zero' or 'random'");
        }
        return solve_ne(spec, c);
      },
      py::arg("spec"), py::arg("tol") = 1e-9, py::arg("damping") = 0.5,
      py::arg("max_iters") = 10000, py::arg("init") = "uba", py::arg("seed") = kDefaultSeed);
  m.def("closed_form_interior_ne", &closed_form_interior_ne, py::arg("spec"), py::arg("mu0"));
  m.def(
      "verify_ne",
      [](const GameSpec& spec, const ActionProfile& p, double tol) {
        const auto c = verify_ne(spec, p, tol);
        return py::dict(py::arg("is_ne") = c.is_ne, py::arg("residual") = c.residual,
                        py::arg("gain") = c.gain);
      },
      py::arg("spec"), py::arg("profile"), py::arg("tol") = 1e-9);
  m.def("dsc_probe", &dsc_probe, py::arg("spec"), py::arg("trials"),
        py::arg("seed") = kDefaultSeed);

  // dynamics
  m.def(
      "simulate_opinions",
      [](const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& x0_plus, double horizon,
         std::optional<std::size_t> steps) {
        const auto t = simulate_opinions(Laplacian(laplacian), x0_plus, horizon, steps);
        Eigen::MatrixXd states(static_cast<Eigen::Index>(t.states.size()), x0_plus.size());
        for (std::size_t k = 0; k < t.states.size(); ++k) {
          states.row(static_cast<Eigen::Index>(k)) = t.states[k].transpose();
        }
        return std::make_pair(t.times, states);
      },
      py::arg("laplacian"), py::arg("x0_plus"), py::arg("T"), py::arg("steps") = py::none(),
      "Returns (times, states) with one state per row.");

  // analysis
  m.def(
      "uba_action",
      [](const GameSpec& spec, int firm) { return uba_action(spec, firm_from_number(firm)); },
      py::arg("spec"), py::arg("firm"));
  m.def(
      "gain_of_targeting",
      [](const GameSpec& spec) {
        const auto g = gain_of_targeting(spec);
        return py::dict(py::arg("got") = g.got, py::arg("u_br") = g.u_br,
                        py::arg("u_uba") = g.u_uba);
      },
      py::arg("spec"));
  m.def(
      "leader_sweep",
      [](std::size_t n, const std::vector<double>& aips, const std::vector<double>& fractions,
         const FirmParams& firm, double x0_value) {
        SweepParams p{n, firm, firm, x0_value};
        const auto res = leader_sweep(p, aips, fractions);
        std::vector<py::dict> rows;
        for (const auto& r : res.rows) {
          rows.push_back(py::dict(py::arg("C") = r.leader_aip,
                                  py::arg("leader_fraction") = r.leader_fraction,
                                  py::arg("leaders") = r.leaders, py::arg("got") = r.got,
                                  py::arg("u_br") = r.u_br, py::arg("u_uba") = r.u_uba));
        }
        return rows;
      },
      py::arg("n_agents"), py::arg("C"), py::arg("fractions"), py::arg("firm") = FirmParams{},
      py::arg("x0") = 0.5);
}
