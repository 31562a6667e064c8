#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netduopoly/game.hpp"

namespace netduopoly {

// Allocations within this distance of 0 or the cap count as clamped.
inline constexpr double kClampTolerance = 1e-10;

/// Exact best response of one firm. Index sets are 0-based.
struct BestResponseResult {
  Eigen::VectorXd action;
  double mu0 = 0.0;                         // budget multiplier
  std::vector<std::size_t> zero_set;       // action == 0
  std::vector<std::size_t> cap_set;        // action == cap
  std::vector<std::size_t> interior_set;   // 0 < action < cap
  double utility = 0.0;
};

/// Stationary point of the Lagrangian for a given budget multiplier:
///   sqrt(gamma rho_n (x_{0,n;-i} + a_{-i,n}) / (mu0 + lambda)) - 1 - a_{-i,n}.
/// Not clamped. Throws SingularPricingError if mu0 + lambda == 0.
Eigen::VectorXd unconstrained_stationary_point(Firm firm, const GameSpec& spec,
                                               const Eigen::VectorXd& opponent, double mu0);

/// Budget multiplier that makes the interior agents in `interior_set` plus
/// cap * |cap_set| spend the budget exactly.
double water_level(Firm firm, const GameSpec& spec, const Eigen::VectorXd& opponent,
                   std::span<const std::size_t> cap_set,
                   std::span<const std::size_t> interior_set);

/// Unique maximiser of u_firm(., opponent) over the firm's action set.
///
/// The clamped stationary allocation is first tried with mu0 = 0. If that
/// overspends, the budget curve sum_n clamp(s sqrt(d_n) - c_n, 0, b) in the
/// level s = sqrt(gamma / (mu0 + lambda)) is piecewise linear with
/// breakpoints c_n / sqrt(d_n) (agent becomes active) and
/// (b + c_n) / sqrt(d_n) (agent hits the cap); a sorted sweep over those 2N
/// breakpoints finds the level where it meets the budget, and mu0 follows
/// from water_level on the resulting partition.
BestResponseResult best_response(Firm firm, const GameSpec& spec, const Eigen::VectorXd& opponent);

/// Largest violation of the KKT system of the best-response problem at
/// `result`: stationarity on the interior set, sign conditions on the
/// clamped sets, and complementary slackness on the budget.
double kkt_residual(Firm firm, const GameSpec& spec, const Eigen::VectorXd& opponent,
                    const BestResponseResult& result);

}  // namespace netduopoly
