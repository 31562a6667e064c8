#include "netduopoly/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "netduopoly/best_response.hpp"
#include "netduopoly/errors.hpp"

namespace netduopoly {

Eigen::VectorXd uba_action(const GameSpec& spec, Firm firm) {
  const auto& params = spec.firm(firm);
  const double share = params.budget / static_cast<double>(spec.n_agents());
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(spec.n_agents()),
                                   std::min(share, params.cap));
}

GainOfTargeting gain_of_targeting(const GameSpec& spec) {
  ActionProfile uniform{uba_action(spec, Firm::kOne), uba_action(spec, Firm::kTwo)};
  GainOfTargeting out;
  out.u_uba = utility(Firm::kOne, spec, uniform);
  if (!(out.u_uba > 0.0)) {
    throw UndefinedGainError("gain of targeting: uniform baseline utility is not positive");
  }
  const auto br = best_response(Firm::kOne, spec, uniform.a2);
  out.u_br = br.utility;
  out.got = (out.u_br - out.u_uba) / out.u_uba;
  return out;
}

std::size_t leader_count(double fraction, std::size_t n_agents) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ValidationError("leader fraction must lie in [0, 1]");
  }
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n_agents) + 1e-9));
  return std::min(count, n_agents);
}

SweepResult leader_sweep(const SweepParams& params, std::span<const double> leader_aips,
                         std::span<const double> leader_fractions) {
  if (params.n_agents == 0) {
    throw ValidationError("leader sweep needs at least one agent");
  }
  for (const double c : leader_aips) {
    if (!std::isfinite(c) || c < 1.0) {
      throw ValidationError("leader AIP C must be at least 1");
    }
  }
  for (const double f : leader_fractions) leader_count(f, params.n_agents);

  const auto n = static_cast<Eigen::Index>(params.n_agents);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(n, params.x0_value);

  SweepResult result;
  result.params = params;
  for (const auto& f : {params.firm1, params.firm2}) {
    if (f.budget / static_cast<double>(params.n_agents) > f.cap) result.uba_clipped = true;
  }
  result.rows.reserve(leader_aips.size() * leader_fractions.size());
  for (const double c : leader_aips) {
    for (const double fraction : leader_fractions) {
      const std::size_t leaders = leader_count(fraction, params.n_agents);
      Eigen::VectorXd rho = Eigen::VectorXd::Ones(n);
      rho.head(static_cast<Eigen::Index>(leaders)).setConstant(c);
      const GameSpec spec(rho, x0, params.firm1, params.firm2);
      const auto g = gain_of_targeting(spec);
      result.rows.push_back({c, fraction, leaders, g.got, g.u_br, g.u_uba});
    }
  }
  return result;
}

NeReport ne_report(const GameSpec& spec, const SolverConfig& config) {
  NeReport report;
  report.equilibrium = solve_ne(spec, config);
  const auto& p = report.equilibrium.profile;
  report.rows.reserve(spec.n_agents());
  for (std::size_t k = 0; k < spec.n_agents(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    report.rows.push_back(
        {k + 1, spec.rho()(i), spec.x0()(i), p.a1(i), p.a2(i), report.equilibrium.regime[k]});
  }
  return report;
}

}  // namespace netduopoly
