#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the solver paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "netduopoly/game.hpp"
#include "netduopoly/graph.hpp"

namespace oracle {

using netduopoly::Firm;
using netduopoly::FirmParams;
using netduopoly::GameSpec;

// u_i straight from the definition, no validation.
inline double utility(Firm firm, const GameSpec& spec, const Eigen::VectorXd& own,
                      const Eigen::VectorXd& other) {
  const auto& p = spec.firm(firm);
  double revenue = 0.0;
  for (Eigen::Index n = 0; n < own.size(); ++n) {
    const double x1 = spec.x0()(n);
    const double a1 = firm == Firm::kOne ? own(n) : other(n);
    const double a2 = firm == Firm::kOne ? other(n) : own(n);
    const double post = (x1 + a1) / (1.0 + a1 + a2);
    revenue += spec.rho()(n) * (firm == Firm::kOne ? post : 1.0 - post);
  }
  return p.gamma * revenue - p.lambda * own.sum();
}

struct GridOptimum {
  double utility = -INFINITY;
  Eigen::VectorXd action;
};

// Exhaustive search over {0, step, 2 step, ...}^N (plus the cap itself)
// restricted to the budget. Per-agent revenue is tabulated once; every grid
// point is still visited.
inline GridOptimum grid_best_response(Firm firm, const GameSpec& spec,
                                      const Eigen::VectorXd& opponent, double step) {
  const auto& p = spec.firm(firm);
  const auto n = static_cast<std::size_t>(spec.n_agents());
  std::vector<double> levels;
  for (int k = 0;; ++k) {
    const double v = k * step;
    if (v > p.cap + 1e-12) break;
    levels.push_back(std::min(v, p.cap));
  }
  if (levels.back() < p.cap) levels.push_back(p.cap);

  std::vector<std::vector<double>> table(n, std::vector<double>(levels.size()));
  for (std::size_t m = 0; m < n; ++m) {
    const auto idx = static_cast<Eigen::Index>(m);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const double a = levels[k];
      const double x1 = spec.x0()(idx);
      const double a1 = firm == Firm::kOne ? a : opponent(idx);
      const double a2 = firm == Firm::kOne ? opponent(idx) : a;
      const double post = (x1 + a1) / (1.0 + a1 + a2);
      table[m][k] = p.gamma * spec.rho()(idx) * (firm == Firm::kOne ? post : 1.0 - post) -
                    p.lambda * a;
    }
  }

  GridOptimum best;
  std::vector<std::size_t> pick(n, 0);
  std::function<void(std::size_t, double, double)> walk = [&](std::size_t m, double spent,
                                                               double value) {
    if (m == n) {
      if (value > best.utility) {
        best.utility = value;
        best.action.resize(static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) best.action(static_cast<Eigen::Index>(j)) = levels[pick[j]];
      }
      return;
    }
    for (std::size_t k = 0; k < levels.size(); ++k) {
      if (spent + levels[k] > p.budget + 1e-12) break;
      pick[m] = k;
      walk(m + 1, spent + levels[k], value + table[m][k]);
    }
  };
  walk(0, 0.0, 0.0);
  return best;
}

// Best response by bisection on the budget multiplier, using the clamped
// stationary point written out independently.
inline Eigen::VectorXd bisection_best_response(Firm firm, const GameSpec& spec,
                                               const Eigen::VectorXd& opponent) {
  const auto& p = spec.firm(firm);
  const auto n = opponent.size();
  const auto alloc = [&](double mu) {
    Eigen::VectorXd a(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double rival_opinion = firm == Firm::kOne ? 1.0 - spec.x0()(k) : spec.x0()(k);
      const double d = spec.rho()(k) * (rival_opinion + opponent(k));
      const double alpha = std::sqrt(p.gamma * d / (mu + p.lambda)) - 1.0 - opponent(k);
      a(k) = std::clamp(alpha, 0.0, p.cap);
    }
    return a;
  };
  Eigen::VectorXd a = alloc(0.0);
  if (a.sum() <= p.budget) return a;
  double lo = 0.0;
  double hi = 1.0;
  while (alloc(hi).sum() > p.budget) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (alloc(mid).sum() > p.budget ? lo : hi) = mid;
  }
  return alloc(hi);
}

// Central differences of u_i in its own action.
inline Eigen::VectorXd fd_gradient(Firm firm, const GameSpec& spec, const Eigen::VectorXd& own,
                                   const Eigen::VectorXd& other, double h) {
  Eigen::VectorXd g(own.size());
  for (Eigen::Index k = 0; k < own.size(); ++k) {
    Eigen::VectorXd up = own, down = own;
    up(k) += h;
    down(k) -= h;
    g(k) = (utility(firm, spec, up, other) - utility(firm, spec, down, other)) / (2.0 * h);
  }
  return g;
}

inline FirmParams random_firm(std::mt19937_64& rng, double max_budget = 5.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FirmParams f;
  f.gamma = 0.5 + 1.5 * u(rng);
  f.lambda = 0.05 + 0.45 * u(rng);
  f.budget = 0.2 + (max_budget - 0.2) * u(rng);
  f.cap = f.budget * (0.2 + 0.8 * u(rng));
  return f;
}

inline GameSpec random_spec(std::mt19937_64& rng, std::size_t n, double max_budget = 5.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd rho(static_cast<Eigen::Index>(n)), x0(static_cast<Eigen::Index>(n));
  for (auto& r : rho) r = 0.1 + 2.9 * u(rng);
  for (auto& x : x0) x = 0.02 + 0.96 * u(rng);
  return GameSpec(rho, x0, random_firm(rng, max_budget), random_firm(rng, max_budget));
}

inline netduopoly::SocialGraph random_graph(std::mt19937_64& rng, std::size_t n,
                                            double density = 0.3) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<netduopoly::Edge> edges;
  for (std::size_t s = 1; s <= n; ++s) {
    for (std::size_t t = 1; t <= n; ++t) {
      if (s != t && u(rng) < density) edges.push_back({s, t, 0.05 + 1.95 * u(rng)});
    }
  }
  return netduopoly::SocialGraph(n, std::move(edges));
}

inline Eigen::VectorXd random_feasible(std::mt19937_64& rng, const FirmParams& p, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd a(static_cast<Eigen::Index>(n));
  for (auto& v : a) v = p.cap * u(rng);
  if (a.sum() > p.budget) a *= p.budget / a.sum();
  return a;
}

}  // namespace oracle
