#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "netduopoly/equilibrium.hpp"
#include "netduopoly/game.hpp"

namespace netduopoly {

// Broadcast baseline: min(B / N, b) on every agent.
Eigen::VectorXd uba_action(const GameSpec& spec, Firm firm);

struct GainOfTargeting {
  double got = 0.0;
  double u_br = 0.0;   // firm 1 best response against a uniform firm 2
  double u_uba = 0.0;  // both uniform
};

/// Relative utility gain of firm 1 from targeting, opponent fixed at UBA.
/// Throws UndefinedGainError when the uniform baseline utility is not positive.
GainOfTargeting gain_of_targeting(const GameSpec& spec);

// Leaders get rho = C, the rest 1.
std::size_t leader_count(double fraction, std::size_t n_agents);

struct SweepRow {
  double leader_aip = 1.0;
  double leader_fraction = 0.0;
  std::size_t leaders = 0;
  double got = 0.0;
  double u_br = 0.0;
  double u_uba = 0.0;
};

struct SweepParams {
  std::size_t n_agents = 100;
  FirmParams firm1;
  FirmParams firm2;
  double x0_value = 0.5;
};

struct SweepResult {
  SweepParams params;
  std::vector<SweepRow> rows;
  // True when B / N exceeded b for some firm so the baseline left budget unspent.
  bool uba_clipped = false;
};

/// GoT over a grid of (C, leader fraction), C-major, in input order.
SweepResult leader_sweep(const SweepParams& params, std::span<const double> leader_aips,
                         std::span<const double> leader_fractions);

struct ReportRow {
  std::size_t agent = 1;  // 1-based
  double rho = 0.0;
  double x0 = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  Regime regime = Regime::kInterior;
};

struct NeReport {
  EquilibriumResult equilibrium;
  std::vector<ReportRow> rows;
};

NeReport ne_report(const GameSpec& spec, const SolverConfig& config = {});

}  // namespace netduopoly
