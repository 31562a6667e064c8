#include "netduopoly/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "netduopoly/errors.hpp"

namespace netduopoly {

Eigen::VectorXd apply_campaign(const Eigen::VectorXd& x0, const ActionProfile& profile) {
  if (profile.a1.size() != x0.size() || profile.a2.size() != x0.size()) {
    throw ValidationError("apply_campaign: action length does not match the opinion vector");
  }
  Eigen::VectorXd out(x0.size());
  for (Eigen::Index k = 0; k < x0.size(); ++k) {
    out(k) = campaign_update(x0(k), profile.a1(k), profile.a2(k));
  }
  return out;
}

std::size_t default_steps(const Laplacian& laplacian, double horizon) {
  const double scaled = std::ceil(100.0 * horizon * laplacian.inf_norm());
  return std::max<std::size_t>(1000, static_cast<std::size_t>(scaled));
}

Trajectory simulate_opinions(const Laplacian& laplacian, const Eigen::VectorXd& x0_plus,
                             double horizon, std::optional<std::size_t> steps) {
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw ValidationError("simulate_opinions: horizon T must be positive");
  }
  if (static_cast<std::size_t>(x0_plus.size()) != laplacian.size()) {
    throw ValidationError("simulate_opinions: opinion vector does not match the graph size");
  }
  if (!x0_plus.allFinite() || (x0_plus.array() < 0.0).any() || (x0_plus.array() > 1.0).any()) {
    throw ValidationError("simulate_opinions: opinions must lie in [0, 1]");
  }
  const std::size_t n_steps = steps.value_or(default_steps(laplacian, horizon));
  if (n_steps < 1) {
    throw ValidationError("simulate_opinions: steps must be at least 1");
  }

  const Eigen::MatrixXd& l = laplacian.matrix();
  const double h = horizon / static_cast<double>(n_steps);
  const std::size_t stride =
      (n_steps + kMaxTrajectorySamples - 2) / (kMaxTrajectorySamples - 1);

  Trajectory traj;
  traj.x0_plus = x0_plus.cwiseMax(kOpinionFloor).cwiseMin(1.0 - kOpinionFloor);
  traj.times.push_back(0.0);
  traj.states.push_back(traj.x0_plus);

  Eigen::VectorXd x = traj.x0_plus;
  for (std::size_t s = 1; s <= n_steps; ++s) {
    const Eigen::VectorXd k1 = -(l * x);
    const Eigen::VectorXd k2 = -(l * (x + 0.5 * h * k1));
    const Eigen::VectorXd k3 = -(l * (x + 0.5 * h * k2));
    const Eigen::VectorXd k4 = -(l * (x + h * k3));
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (s % stride == 0 || s == n_steps) {
      traj.times.push_back(s == n_steps ? horizon : h * static_cast<double>(s));
      traj.states.push_back(x);
    }
  }
  return traj;
}

std::array<double, 2> realized_revenue(const SocialGraph& graph, const GameSpec& spec,
                                       const ActionProfile& profile, double horizon,
                                       std::optional<std::size_t> steps) {
  if (graph.n_agents() != spec.n_agents()) {
    throw ValidationError("realized_revenue: graph and game have different agent counts");
  }
  validate_profile(spec, profile);
  const Laplacian l = build_laplacian(graph);
  const AipVector aip = compute_aip(l, horizon);
  const double mismatch = (aip.rho - spec.rho()).cwiseAbs().maxCoeff();
  if (mismatch > 1e-6 * std::max(1.0, aip.rho.cwiseAbs().maxCoeff())) {
    throw ValidationError("realized_revenue: game rho is not the AIP of this graph at this T");
  }

  const Eigen::VectorXd x_plus = apply_campaign(spec.x0(), profile);
  const auto traj = simulate_opinions(l, x_plus, horizon, steps);
  const Eigen::VectorXd& x_end = traj.states.back();
  const double mass = x_end.sum();
  const double n = static_cast<double>(spec.n_agents());
  return {spec.firm1().gamma * mass - spec.firm1().lambda * profile.a1.sum(),
          spec.firm2().gamma * (n - mass) - spec.firm2().lambda * profile.a2.sum()};
}

}  // namespace netduopoly
