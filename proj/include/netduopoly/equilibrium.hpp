#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "netduopoly/game.hpp"

namespace netduopoly {

enum class Regime { kInterior, kFirm1Zero, kFirm2Zero, kFirm1Cap, kFirm2Cap, kBothBoundary };

std::string_view regime_name(Regime regime);

enum class InitScheme { kUniform, kZero, kRandom };

inline constexpr std::uint64_t kDefaultSeed = 20180917;

struct SolverConfig {
  double tolerance = 1e-9;
  int max_iters = 10000;
  double damping = 0.5;
  // Halve the damping when the residual stalls.
  bool adaptive_damping = true;
  InitScheme init_scheme = InitScheme::kUniform;
  // Overrides init_scheme when set.
  std::optional<ActionProfile> init;
  std::uint64_t seed = kDefaultSeed;

  void validate() const;
};

struct EquilibriumResult {
  ActionProfile profile;
  std::array<double, 2> utilities{};
  std::array<double, 2> mu0{};
  double residual = 0.0;
  int iterations = 0;
  std::vector<Regime> regime;
  bool converged = false;
  double final_damping = 0.0;
};

/// Fixed-point iteration a <- (1 - theta) a + theta * beta(a) with Jacobi
/// updates, stopped when max_i |beta_i(a_{-i}) - a_i|_inf <= tolerance.
/// Running out of iterations is reported via `converged`, not thrown.
EquilibriumResult solve_ne(const GameSpec& spec, const SolverConfig& config = {});

/// Interior equilibrium a_{i,n} = (k_i / (k_i + k_{-i}))^2 k_{-i} rho_n - x_{0,n;i}
/// with k_i = gamma_i / (lambda_i + mu0_i). Empty when any component leaves
/// (0, b_i) or the budgets are inconsistent with the multipliers.
std::optional<ActionProfile> closed_form_interior_ne(const GameSpec& spec,
                                                     std::array<double, 2> mu0);

struct NeCheck {
  bool is_ne = false;
  double residual = 0.0;
  std::array<double, 2> gain{};  // u_i(beta_i, a_{-i}) - u_i(a), never negative
};

NeCheck verify_ne(const GameSpec& spec, const ActionProfile& profile, double tolerance);

// max_i |beta_i(a_{-i}) - a_i|_inf
double br_residual(const GameSpec& spec, const ActionProfile& profile);

std::vector<Regime> classify_regimes(const GameSpec& spec, const ActionProfile& profile);

/// Uniform sample of [0, b]^N, scaled onto the budget if it overspends.
ActionProfile random_feasible_profile(const GameSpec& spec, std::mt19937_64& rng);

/// Largest (a - a')^T (g(a) - g(a')) over `trials` random pairs of distinct
/// feasible profiles, g being the pseudo-gradient weighted by r = (1/gamma_1, 1/gamma_2).
/// Negative for every pair when the weighted sum is diagonally strictly concave.
double dsc_probe(const GameSpec& spec, int trials, std::uint64_t seed = kDefaultSeed);

struct ConcavityProbe {
  double max_diagonal = 0.0;   // largest d^2 u_i / d a_{i,n}^2 seen
  double max_abs_cross = 0.0;  // largest |d^2 u_i / d a_{i,n} d a_{i,m}|, m != n
};

/// Central finite-difference Hessian entries of both utilities at `points`
/// random feasible profiles.
ConcavityProbe concavity_probe(const GameSpec& spec, int points, std::uint64_t seed = kDefaultSeed,
                               double step = 1e-3);

}  // namespace netduopoly
