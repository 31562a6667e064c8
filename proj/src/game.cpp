#include "netduopoly/game.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "netduopoly/errors.hpp"

namespace netduopoly {
namespace {

void require_nonnegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError(std::string(name) + " must be finite and nonnegative");
  }
}

}  // namespace

Firm firm_from_number(int number) {
  if (number == 1) return Firm::kOne;
  if (number == 2) return Firm::kTwo;
  throw ValidationError("firm must be 1 or 2, got " + std::to_string(number));
}

void FirmParams::validate() const {
  require_nonnegative(gamma, "gamma");
  require_nonnegative(lambda, "lambda");
  require_nonnegative(budget, "budget B");
  require_nonnegative(cap, "cap b");
  if (cap > budget) {
    throw ValidationError("cap b must not exceed budget B");
  }
}

GameSpec::GameSpec(Eigen::VectorXd rho, Eigen::VectorXd x0, FirmParams firm1, FirmParams firm2)
    : rho_(std::move(rho)), x0_(std::move(x0)), firm1_(firm1), firm2_(firm2) {
  if (rho_.size() == 0) {
    throw ValidationError("game needs at least one agent");
  }
  if (x0_.size() != rho_.size()) {
    throw ValidationError("x0 has " + std::to_string(x0_.size()) + " entries, rho has " +
                          std::to_string(rho_.size()));
  }
  for (Eigen::Index n = 0; n < rho_.size(); ++n) {
    if (!std::isfinite(rho_(n)) || rho_(n) <= 0.0) {
      throw ValidationError("rho[" + std::to_string(n + 1) + "] must be positive");
    }
    if (!std::isfinite(x0_(n)) || x0_(n) < kOpinionFloor || x0_(n) > 1.0 - kOpinionFloor) {
      throw ValidationError("x0[" + std::to_string(n + 1) + "] must lie strictly inside (0, 1)");
    }
  }
  try {
    firm1_.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("firm1: ") + e.what());
  }
  try {
    firm2_.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("firm2: ") + e.what());
  }
}

GameSpec GameSpec::with_firm(Firm f, const FirmParams& params) const {
  return f == Firm::kOne ? GameSpec(rho_, x0_, params, firm2_)
                         : GameSpec(rho_, x0_, firm1_, params);
}

ActionProfile ActionProfile::zeros(std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  return {Eigen::VectorXd::Zero(size), Eigen::VectorXd::Zero(size)};
}

void validate_action(const FirmParams& params, const Eigen::VectorXd& action,
                     std::size_t n_agents, const char* what) {
  if (static_cast<std::size_t>(action.size()) != n_agents) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(n_agents) +
                          " entries, got " + std::to_string(action.size()));
  }
  for (Eigen::Index n = 0; n < action.size(); ++n) {
    const double a = action(n);
    if (!std::isfinite(a) || a < 0.0 || a > params.cap) {
      throw ValidationError(std::string(what) + "[" + std::to_string(n + 1) +
                            "] outside [0, b]");
    }
  }
  if (action.sum() > params.budget + kBudgetSlack) {
    throw ValidationError(std::string(what) + ": spend exceeds budget B");
  }
}

void validate_profile(const GameSpec& spec, const ActionProfile& profile) {
  validate_action(spec.firm1(), profile.a1, spec.n_agents(), "a1");
  validate_action(spec.firm2(), profile.a2, spec.n_agents(), "a2");
}

double campaign_update(double x0, double a1, double a2) {
  if (!(x0 > 0.0 && x0 < 1.0)) {
    throw ValidationError("campaign_update: opinion must lie in (0, 1)");
  }
  if (!std::isfinite(a1) || !std::isfinite(a2) || a1 < 0.0 || a2 < 0.0) {
    throw ValidationError("campaign_update: spends must be finite and nonnegative");
  }
  return (x0 + a1) / (1.0 + (a1 + a2));
}

double accurate_sum(const Eigen::VectorXd& terms) {
  if (terms.size() <= 1000) return terms.sum();
  double sum = 0.0;
  double carry = 0.0;
  for (const double v : terms) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

double utility(Firm firm, const GameSpec& spec, const ActionProfile& profile) {
  validate_profile(spec, profile);
  const auto& own = profile.of(firm);
  const auto& other = profile.of(rival(firm));
  const auto n = static_cast<Eigen::Index>(spec.n_agents());
  Eigen::VectorXd revenue(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    revenue(k) = spec.rho()(k) * (spec.opinion_for(firm, idx) + own(k)) / (1.0 + (own(k) + other(k)));
  }
  const auto& params = spec.firm(firm);
  return params.gamma * accurate_sum(revenue) - params.lambda * accurate_sum(own);
}

Eigen::VectorXd utility_gradient(Firm firm, const GameSpec& spec, const ActionProfile& profile) {
  validate_profile(spec, profile);
  const auto& own = profile.of(firm);
  const auto& other = profile.of(rival(firm));
  const auto& params = spec.firm(firm);
  const auto n = static_cast<Eigen::Index>(spec.n_agents());
  Eigen::VectorXd grad(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double rival_mass = spec.opinion_for(rival(firm), static_cast<std::size_t>(k)) + other(k);
    const double denom = 1.0 + (own(k) + other(k));
    grad(k) = params.gamma * spec.rho()(k) * rival_mass / (denom * denom) - params.lambda;
  }
  return grad;
}

}  // namespace netduopoly
