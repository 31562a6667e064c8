#include "netduopoly/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include "netduopoly/errors.hpp"

namespace netduopoly {
namespace {

struct Coefficients {
  Eigen::VectorXd root_d;  // sqrt(rho_n (x_{0,n;-i} + a_{-i,n}))
  Eigen::VectorXd offset;  // 1 + a_{-i,n}
};

Coefficients coefficients(Firm firm, const GameSpec& spec, const Eigen::VectorXd& opponent) {
  validate_action(spec.firm(rival(firm)), opponent, spec.n_agents(), "opponent action");
  const auto n = static_cast<Eigen::Index>(spec.n_agents());
  Coefficients c{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d =
        spec.rho()(k) * (spec.opinion_for(rival(firm), static_cast<std::size_t>(k)) + opponent(k));
    if (!(d > 0.0)) {
      throw ValidationError("best response: d[" + std::to_string(k + 1) + "] is not positive");
    }
    c.root_d(k) = std::sqrt(d);
    c.offset(k) = 1.0 + opponent(k);
  }
  return c;
}

enum class Breakpoint { kActivates, kCaps };

struct Event {
  double level;
  Breakpoint kind;
  Eigen::Index agent;
};

// Level s at which sum_n clamp(s sqrt(d_n) - c_n, 0, b) first reaches budget.
// Caller guarantees the curve exceeds the budget somewhere.
double budget_level(const Coefficients& c, double cap, double budget) {
  const auto n = c.root_d.size();
  std::vector<Event> events;
  events.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index k = 0; k < n; ++k) {
    events.push_back({c.offset(k) / c.root_d(k), Breakpoint::kActivates, k});
    events.push_back({(cap + c.offset(k)) / c.root_d(k), Breakpoint::kCaps, k});
  }
  std::sort(events.begin(), events.end(), [](const Event& x, const Event& y) {
    return std::tie(x.level, x.kind, x.agent) < std::tie(y.level, y.kind, y.agent);
  });

  // Between breakpoints the spend is slope * s + intercept.
  double slope = 0.0;
  double intercept = 0.0;
  for (const auto& e : events) {
    const double spend = slope * e.level + intercept;
    if (spend >= budget) {
      return slope > 0.0 ? (budget - intercept) / slope : e.level;
    }
    if (e.kind == Breakpoint::kActivates) {
      slope += c.root_d(e.agent);
      intercept -= c.offset(e.agent);
    } else {
      slope -= c.root_d(e.agent);
      intercept += c.offset(e.agent) + cap;
    }
  }
  return events.empty() ? 0.0 : events.back().level;
}

void classify(BestResponseResult& result, double cap) {
  result.zero_set.clear();
  result.cap_set.clear();
  result.interior_set.clear();
  for (Eigen::Index k = 0; k < result.action.size(); ++k) {
    double& a = result.action(k);
    const auto idx = static_cast<std::size_t>(k);
    if (a <= kClampTolerance) {
      a = 0.0;
      result.zero_set.push_back(idx);
    } else if (a >= cap - kClampTolerance) {
      a = cap;
      result.cap_set.push_back(idx);
    } else {
      result.interior_set.push_back(idx);
    }
  }
}

double own_utility(Firm firm, const GameSpec& spec, const Eigen::VectorXd& own,
                   const Eigen::VectorXd& opponent) {
  ActionProfile profile;
  profile.of(firm) = own;
  profile.of(rival(firm)) = opponent;
  return utility(firm, spec, profile);
}

}  // namespace

Eigen::VectorXd unconstrained_stationary_point(Firm firm, const GameSpec& spec,
                                               const Eigen::VectorXd& opponent, double mu0) {
  if (!std::isfinite(mu0) || mu0 < 0.0) {
    throw ValidationError("mu0 must be finite and nonnegative");
  }
  const auto& params = spec.firm(firm);
  const double price = mu0 + params.lambda;
  if (price <= 0.0) {
    throw SingularPricingError("mu0 + lambda is zero: stationary point is unbounded");
  }
  const auto c = coefficients(firm, spec, opponent);
  const double level = std::sqrt(params.gamma / price);
  return (level * c.root_d - c.offset).eval();
}

double water_level(Firm firm, const GameSpec& spec, const Eigen::VectorXd& opponent,
                   std::span<const std::size_t> cap_set,
                   std::span<const std::size_t> interior_set) {
  const auto n = spec.n_agents();
  std::vector<char> member(n, 0);
  for (const auto set : {cap_set, interior_set}) {
    for (const auto k : set) {
      if (k >= n) {
        throw ValidationError("water_level: agent index out of range");
      }
      if (member[k]) {
        throw ValidationError("water_level: cap and interior sets overlap");
      }
      member[k] = 1;
    }
  }
  if (interior_set.empty()) {
    throw InfeasiblePartitionError("water_level: interior set is empty");
  }
  const auto& params = spec.firm(firm);
  const auto c = coefficients(firm, spec, opponent);
  double root_sum = 0.0;
  double denom = params.budget - params.cap * static_cast<double>(cap_set.size());
  for (const auto k : interior_set) {
    const auto idx = static_cast<Eigen::Index>(k);
    root_sum += c.root_d(idx);
    denom += c.offset(idx);
  }
  if (!(denom > 0.0)) {
    throw InfeasiblePartitionError("water_level: nonpositive denominator for this partition");
  }
  const double ratio = root_sum / denom;
  return params.gamma * ratio * ratio - params.lambda;
}

BestResponseResult best_response(Firm firm, const GameSpec& spec, const Eigen::VectorXd& opponent) {
  const auto& params = spec.firm(firm);
  const auto c = coefficients(firm, spec, opponent);
  const auto n = static_cast<Eigen::Index>(spec.n_agents());

  BestResponseResult result;
  result.action = Eigen::VectorXd::Zero(n);

  if (params.budget == 0.0 || params.cap == 0.0) {
    classify(result, params.cap);
    result.utility = own_utility(firm, spec, result.action, opponent);
    return result;
  }

  const bool can_bind = params.cap * static_cast<double>(n) > params.budget;
  if (params.lambda == 0.0 && (!can_bind || params.gamma == 0.0)) {
    throw SingularPricingError(
        "lambda is zero and the budget does not bind: best response is unbounded or not unique");
  }

  // mu0 = 0 first; it stands if the clamped allocation fits the budget.
  if (params.lambda > 0.0) {
    const double free_level = std::sqrt(params.gamma / params.lambda);
    result.action = (free_level * c.root_d - c.offset).cwiseMax(0.0).cwiseMin(params.cap);
    if (result.action.sum() <= params.budget) {
      result.mu0 = 0.0;
      classify(result, params.cap);
      result.utility = own_utility(firm, spec, result.action, opponent);
      return result;
    }
  }

  const double level = budget_level(c, params.cap, params.budget);
  std::vector<std::size_t> cap_set;
  std::vector<std::size_t> interior_set;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double raw = level * c.root_d(k) - c.offset(k);
    if (raw >= params.cap) {
      cap_set.push_back(static_cast<std::size_t>(k));
    } else if (raw > 0.0) {
      interior_set.push_back(static_cast<std::size_t>(k));
    }
  }

  if (interior_set.empty()) {
    result.mu0 = std::max(0.0, params.gamma / (level * level) - params.lambda);
  } else {
    result.mu0 = std::max(0.0, water_level(firm, spec, opponent, cap_set, interior_set));
  }

  result.action.setZero();
  for (const auto k : cap_set) result.action(static_cast<Eigen::Index>(k)) = params.cap;
  if (!interior_set.empty()) {
    const double price = result.mu0 + params.lambda;
    const double interior_level = std::sqrt(params.gamma / price);
    for (const auto k : interior_set) {
      const auto idx = static_cast<Eigen::Index>(k);
      result.action(idx) =
          std::clamp(interior_level * c.root_d(idx) - c.offset(idx), 0.0, params.cap);
    }
  }
  classify(result, params.cap);
  // Rounding in the level can leave the spend a few ulps over B.
  const double spend = result.action.sum();
  if (spend > params.budget && !result.interior_set.empty()) {
    const double excess = spend - params.budget;
    for (const auto k : result.interior_set) {
      auto& a = result.action(static_cast<Eigen::Index>(k));
      const double cut = std::min(a, excess);
      if (cut > 0.0) {
        a -= cut;
        break;
      }
    }
  }
  result.utility = own_utility(firm, spec, result.action, opponent);
  return result;
}

double kkt_residual(Firm firm, const GameSpec& spec, const Eigen::VectorXd& opponent,
                    const BestResponseResult& result) {
  ActionProfile profile;
  profile.of(firm) = result.action;
  profile.of(rival(firm)) = opponent;
  // utility_gradient already carries the -lambda term.
  const Eigen::VectorXd grad = utility_gradient(firm, spec, profile);
  const auto& params = spec.firm(firm);
  const double price = result.mu0;

  double worst = 0.0;
  for (const auto k : result.interior_set) {
    worst = std::max(worst, std::abs(grad(static_cast<Eigen::Index>(k)) - price));
  }
  for (const auto k : result.zero_set) {
    worst = std::max(worst, grad(static_cast<Eigen::Index>(k)) - price);
  }
  for (const auto k : result.cap_set) {
    worst = std::max(worst, price - grad(static_cast<Eigen::Index>(k)));
  }
  const double spend = result.action.sum();
  worst = std::max(worst, spend - params.budget - kBudgetSlack);
  worst = std::max(worst, std::abs(result.mu0 * (spend - params.budget)));
  return worst;
}

}  // namespace netduopoly
