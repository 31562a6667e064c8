#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netduopoly/game.hpp"
#include "netduopoly/graph.hpp"

namespace netduopoly {

inline constexpr std::size_t kMaxTrajectorySamples = 2048;

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  Eigen::VectorXd x0_plus;
};

// Post-campaign opinions x(0+), componentwise campaign_update.
Eigen::VectorXd apply_campaign(const Eigen::VectorXd& x0, const ActionProfile& profile);

// max(1000, ceil(100 * T * |L|_inf))
std::size_t default_steps(const Laplacian& laplacian, double horizon);

/// Integrates dx/dt = -L x on [0, T] with fixed-step RK4. The start state is
/// clipped into [1e-9, 1 - 1e-9]; at most kMaxTrajectorySamples states are
/// kept, always including both end points.
Trajectory simulate_opinions(const Laplacian& laplacian, const Eigen::VectorXd& x0_plus,
                             double horizon, std::optional<std::size_t> steps = std::nullopt);

/// Utilities recomputed from simulated opinions at T instead of rho. `spec.rho()`
/// must be the AIP of `graph` at `horizon`.
std::array<double, 2> realized_revenue(const SocialGraph& graph, const GameSpec& spec,
                                       const ActionProfile& profile, double horizon,
                                       std::optional<std::size_t> steps = std::nullopt);

}  // namespace netduopoly
