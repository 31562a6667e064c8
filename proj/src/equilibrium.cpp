#include "netduopoly/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "netduopoly/analysis.hpp"
#include "netduopoly/best_response.hpp"
#include "netduopoly/errors.hpp"

namespace netduopoly {
namespace {

constexpr int kStallWindow = 50;
constexpr double kMinDamping = 1.0 / 64.0;

bool at_zero(double a) { return a <= kClampTolerance; }
bool at_cap(double a, double cap) { return a >= cap - kClampTolerance; }

double max_abs_diff(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return x.size() == 0 ? 0.0 : (x - y).cwiseAbs().maxCoeff();
}

Eigen::VectorXd random_action(const FirmParams& params, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd a(static_cast<Eigen::Index>(n));
  for (auto& v : a) v = unit(rng) * params.cap;
  const double spend = a.sum();
  if (spend > params.budget && spend > 0.0) a *= params.budget / spend;
  return a;
}

// Random point far enough from the bounds that +-2 steps in any two
// coordinates stays feasible.
Eigen::VectorXd probe_action(const FirmParams& params, std::size_t n, double step,
                             std::mt19937_64& rng) {
  const double margin = 2.0 * step;
  if (params.cap <= 2.0 * margin ||
      params.budget <= margin * (static_cast<double>(n) + 2.0)) {
    throw ValidationError("concavity_probe: budget or cap too small for the finite-difference step");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd a(static_cast<Eigen::Index>(n));
  for (auto& v : a) v = margin + unit(rng) * (params.cap - 2.0 * margin);
  const double room = params.budget - 2.0 * margin;
  const double spend = a.sum();
  if (spend > room) {
    const double base = margin * static_cast<double>(n);
    a = (a.array() - margin) * ((room - base) / (spend - base)) + margin;
  }
  return a;
}

}  // namespace

std::string_view regime_name(Regime regime) {
  switch (regime) {
    case Regime::kInterior: return "interior";
    case Regime::kFirm1Zero: return "firm1-zero";
    case Regime::kFirm2Zero: return "firm2-zero";
    case Regime::kFirm1Cap: return "firm1-cap";
    case Regime::kFirm2Cap: return "firm2-cap";
    case Regime::kBothBoundary: return "both-boundary";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!std::isfinite(tolerance) || tolerance <= 0.0) {
    throw ValidationError("solver tolerance must be positive");
  }
  if (max_iters < 1) {
    throw ValidationError("solver max_iters must be at least 1");
  }
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw ValidationError("solver damping must lie in (0, 1]");
  }
}

double br_residual(const GameSpec& spec, const ActionProfile& profile) {
  validate_profile(spec, profile);
  const auto br1 = best_response(Firm::kOne, spec, profile.a2);
  const auto br2 = best_response(Firm::kTwo, spec, profile.a1);
  return std::max(max_abs_diff(br1.action, profile.a1), max_abs_diff(br2.action, profile.a2));
}

std::vector<Regime> classify_regimes(const GameSpec& spec, const ActionProfile& profile) {
  const double b1 = spec.firm1().cap;
  const double b2 = spec.firm2().cap;
  std::vector<Regime> out;
  out.reserve(spec.n_agents());
  for (Eigen::Index k = 0; k < profile.a1.size(); ++k) {
    const double a1 = profile.a1(k);
    const double a2 = profile.a2(k);
    const bool edge1 = at_zero(a1) || at_cap(a1, b1);
    const bool edge2 = at_zero(a2) || at_cap(a2, b2);
    Regime r = Regime::kInterior;
    if (edge1 && edge2) {
      r = Regime::kBothBoundary;
    } else if (edge1) {
      r = at_zero(a1) ? Regime::kFirm1Zero : Regime::kFirm1Cap;
    } else if (edge2) {
      r = at_zero(a2) ? Regime::kFirm2Zero : Regime::kFirm2Cap;
    }
    out.push_back(r);
  }
  return out;
}

ActionProfile random_feasible_profile(const GameSpec& spec, std::mt19937_64& rng) {
  ActionProfile p;
  p.a1 = random_action(spec.firm1(), spec.n_agents(), rng);
  p.a2 = random_action(spec.firm2(), spec.n_agents(), rng);
  return p;
}

EquilibriumResult solve_ne(const GameSpec& spec, const SolverConfig& config) {
  config.validate();
  const auto n = spec.n_agents();

  ActionProfile current;
  if (config.init) {
    validate_profile(spec, *config.init);
    current = *config.init;
  } else {
    switch (config.init_scheme) {
      case InitScheme::kUniform:
        current.a1 = uba_action(spec, Firm::kOne);
        current.a2 = uba_action(spec, Firm::kTwo);
        break;
      case InitScheme::kZero:
        current = ActionProfile::zeros(n);
        break;
      case InitScheme::kRandom: {
        std::mt19937_64 rng(config.seed);
        current = random_feasible_profile(spec, rng);
        break;
      }
    }
  }

  EquilibriumResult result;
  double theta = config.damping;
  double best = std::numeric_limits<double>::infinity();
  int stall = 0;

  auto br1 = best_response(Firm::kOne, spec, current.a2);
  auto br2 = best_response(Firm::kTwo, spec, current.a1);
  double residual =
      std::max(max_abs_diff(br1.action, current.a1), max_abs_diff(br2.action, current.a2));

  int iter = 0;
  while (residual > config.tolerance && iter < config.max_iters) {
    if (residual < best) {
      best = residual;
      stall = 0;
    } else if (config.adaptive_damping && ++stall >= kStallWindow && theta > kMinDamping) {
      theta = std::max(kMinDamping, theta * 0.5);
      stall = 0;
    }
    current.a1 = ((1.0 - theta) * current.a1 + theta * br1.action)
                     .cwiseMax(0.0)
                     .cwiseMin(spec.firm1().cap);
    current.a2 = ((1.0 - theta) * current.a2 + theta * br2.action)
                     .cwiseMax(0.0)
                     .cwiseMin(spec.firm2().cap);
    ++iter;
    br1 = best_response(Firm::kOne, spec, current.a2);
    br2 = best_response(Firm::kTwo, spec, current.a1);
    residual =
        std::max(max_abs_diff(br1.action, current.a1), max_abs_diff(br2.action, current.a2));
  }

  result.converged = residual <= config.tolerance;
  if (result.converged) {
    // The best-response pair itself is usually an even closer fixed point,
    // with clamped agents exactly on their bounds.
    ActionProfile candidate{br1.action, br2.action};
    auto c1 = best_response(Firm::kOne, spec, candidate.a2);
    auto c2 = best_response(Firm::kTwo, spec, candidate.a1);
    const double candidate_residual =
        std::max(max_abs_diff(c1.action, candidate.a1), max_abs_diff(c2.action, candidate.a2));
    if (candidate_residual <= residual) {
      current = std::move(candidate);
      br1 = std::move(c1);
      br2 = std::move(c2);
      residual = candidate_residual;
    }
  }

  result.profile = current;
  result.residual = residual;
  result.iterations = iter;
  result.mu0 = {br1.mu0, br2.mu0};
  result.utilities = {utility(Firm::kOne, spec, current), utility(Firm::kTwo, spec, current)};
  result.regime = classify_regimes(spec, current);
  result.final_damping = theta;
  return result;
}

std::optional<ActionProfile> closed_form_interior_ne(const GameSpec& spec,
                                                     std::array<double, 2> mu0) {
  for (const double m : mu0) {
    if (!std::isfinite(m) || m < 0.0) {
      throw ValidationError("closed_form_interior_ne: multipliers must be nonnegative");
    }
  }
  const auto& f1 = spec.firm1();
  const auto& f2 = spec.firm2();
  const double p1 = f1.lambda + mu0[0];
  const double p2 = f2.lambda + mu0[1];
  if (p1 <= 0.0 || p2 <= 0.0) return std::nullopt;
  const double k1 = f1.gamma / p1;
  const double k2 = f2.gamma / p2;
  if (k1 + k2 <= 0.0) return std::nullopt;

  const double s1 = (k1 / (k1 + k2)) * (k1 / (k1 + k2)) * k2;
  const double s2 = (k2 / (k1 + k2)) * (k2 / (k1 + k2)) * k1;
  ActionProfile out;
  out.a1 = s1 * spec.rho() - spec.x0();
  out.a2 = s2 * spec.rho() - (Eigen::VectorXd::Ones(spec.rho().size()) - spec.x0());

  for (Eigen::Index k = 0; k < out.a1.size(); ++k) {
    if (!(out.a1(k) > 0.0 && out.a1(k) < f1.cap)) return std::nullopt;
    if (!(out.a2(k) > 0.0 && out.a2(k) < f2.cap)) return std::nullopt;
  }
  const auto budget_consistent = [](double spend, const FirmParams& f, double m) {
    if (m == 0.0) return spend <= f.budget + kBudgetSlack;
    return std::abs(spend - f.budget) <= 1e-8 * std::max(1.0, f.budget);
  };
  if (!budget_consistent(out.a1.sum(), f1, mu0[0]) ||
      !budget_consistent(out.a2.sum(), f2, mu0[1])) {
    return std::nullopt;
  }
  return out;
}

NeCheck verify_ne(const GameSpec& spec, const ActionProfile& profile, double tolerance) {
  if (!std::isfinite(tolerance) || tolerance <= 0.0) {
    throw ValidationError("verify_ne: tolerance must be positive");
  }
  validate_profile(spec, profile);
  const auto br1 = best_response(Firm::kOne, spec, profile.a2);
  const auto br2 = best_response(Firm::kTwo, spec, profile.a1);
  NeCheck check;
  check.residual =
      std::max(max_abs_diff(br1.action, profile.a1), max_abs_diff(br2.action, profile.a2));
  check.is_ne = check.residual <= tolerance;
  check.gain[0] = std::max(0.0, br1.utility - utility(Firm::kOne, spec, profile));
  check.gain[1] = std::max(0.0, br2.utility - utility(Firm::kTwo, spec, profile));
  return check;
}

double dsc_probe(const GameSpec& spec, int trials, std::uint64_t seed) {
  if (trials < 1) {
    throw ValidationError("dsc_probe: trials must be at least 1");
  }
  if (spec.firm1().gamma <= 0.0 || spec.firm2().gamma <= 0.0) {
    throw ValidationError("dsc_probe: weights 1/gamma need gamma > 0");
  }
  const double r1 = 1.0 / spec.firm1().gamma;
  const double r2 = 1.0 / spec.firm2().gamma;
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const auto a = random_feasible_profile(spec, rng);
    auto b = random_feasible_profile(spec, rng);
    while (a.a1 == b.a1 && a.a2 == b.a2) b = random_feasible_profile(spec, rng);
    const Eigen::VectorXd g1 = r1 * (utility_gradient(Firm::kOne, spec, a) -
                                     utility_gradient(Firm::kOne, spec, b));
    const Eigen::VectorXd g2 = r2 * (utility_gradient(Firm::kTwo, spec, a) -
                                     utility_gradient(Firm::kTwo, spec, b));
    const double inner = (a.a1 - b.a1).dot(g1) + (a.a2 - b.a2).dot(g2);
    worst = std::max(worst, inner);
  }
  return worst;
}

ConcavityProbe concavity_probe(const GameSpec& spec, int points, std::uint64_t seed,
                               double step) {
  if (points < 1 || !(step > 0.0)) {
    throw ValidationError("concavity_probe: need points >= 1 and a positive step");
  }
  const auto n = spec.n_agents();
  std::mt19937_64 rng(seed);
  ConcavityProbe probe;
  probe.max_diagonal = -std::numeric_limits<double>::infinity();
  const double h2 = step * step;

  for (int p = 0; p < points; ++p) {
    ActionProfile base;
    base.a1 = probe_action(spec.firm1(), n, step, rng);
    base.a2 = probe_action(spec.firm2(), n, step, rng);
    for (const Firm firm : {Firm::kOne, Firm::kTwo}) {
      const auto u = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
        ActionProfile shifted = base;
        shifted.of(firm)(i) += di;
        shifted.of(firm)(j) += dj;
        return utility(firm, spec, shifted);
      };
      const double centre = utility(firm, spec, base);
      for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        const double second = (u(i, step, i, 0.0) - 2.0 * centre + u(i, -step, i, 0.0)) / h2;
        probe.max_diagonal = std::max(probe.max_diagonal, second);
        for (Eigen::Index j = i + 1; j < static_cast<Eigen::Index>(n); ++j) {
          const double cross = (u(i, step, j, step) - u(i, step, j, -step) -
                                u(i, -step, j, step) + u(i, -step, j, -step)) /
                               (4.0 * h2);
          probe.max_abs_cross = std::max(probe.max_abs_cross, std::abs(cross));
        }
      }
    }
  }
  return probe;
}

}  // namespace netduopoly
