#include <cmath>
#include <random>

#include <doctest.h>

#include "netduopoly/errors.hpp"
#include "netduopoly/game.hpp"
#include "oracles.hpp"

using namespace netduopoly;

namespace {

GameSpec single_agent(double lambda1 = 0.1, double lambda2 = 0.1) {
  return GameSpec(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 0.5),
                  FirmParams{1.0, lambda1, 5.0, 5.0}, FirmParams{1.0, lambda2, 5.0, 5.0});
}

ActionProfile pair(double a1, double a2) {
  return {Eigen::VectorXd::Constant(1, a1), Eigen::VectorXd::Constant(1, a2)};
}

}  // namespace

TEST_CASE("campaign_update examples") {
  CHECK(campaign_update(0.5, 0.0, 0.0) == 0.5);
  CHECK(campaign_update(0.3, 1.0, 1.0) == doctest::Approx(1.3 / 3.0).epsilon(1e-15));
  CHECK(std::abs(campaign_update(0.2, 1e6, 1e6) - 0.5) <= 1e-5);
  // Ratio limit 1 / (1 + c) with c = 3.
  CHECK(campaign_update(0.9, 1e8, 3e8) == doctest::Approx(0.25).epsilon(1e-7));
  CHECK_THROWS_AS(campaign_update(0.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(campaign_update(1.0, 1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(campaign_update(0.5, -1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(campaign_update(0.5, INFINITY, 1.0), ValidationError);
}

TEST_CASE("campaign_update is symmetric between the firms") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> x(0.001, 0.999), a(0.0, 20.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const double x0 = x(rng), a1 = a(rng), a2 = a(rng);
    const double total = campaign_update(x0, a1, a2) + campaign_update(1.0 - x0, a2, a1);
    CHECK(std::abs(total - 1.0) <= 4 * std::numeric_limits<double>::epsilon());
  }
}

TEST_CASE("utility examples") {
  const auto spec = single_agent();
  CHECK(utility(Firm::kOne, spec, pair(0, 0)) == doctest::Approx(0.5));
  CHECK(utility(Firm::kOne, spec, pair(2, 2)) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(utility(Firm::kTwo, spec, pair(2, 2)) == doctest::Approx(0.3).epsilon(1e-14));

  const auto no_revenue = spec.with_firm(Firm::kOne, FirmParams{0.0, 0.1, 5.0, 5.0});
  CHECK(utility(Firm::kOne, no_revenue, pair(1.5, 2)) == doctest::Approx(-0.15));
}

TEST_CASE("utility_gradient examples") {
  const auto spec = single_agent();
  CHECK(utility_gradient(Firm::kOne, spec, pair(0, 0))(0) == doctest::Approx(0.4));
  CHECK(std::abs(utility_gradient(Firm::kOne, spec, pair(2, 2))(0)) <= 1e-15);
  CHECK(std::abs(utility_gradient(Firm::kTwo, spec, pair(2, 2))(0)) <= 1e-15);
}

TEST_CASE("utility_gradient agrees with central differences") {
  std::mt19937_64 rng(42);
  int checked = 0;
  for (int s = 0; s < 100; ++s) {
    const auto spec = oracle::random_spec(rng, 1 + s % 6);
    for (int p = 0; p < 10; ++p) {
      const auto n = spec.n_agents();
      ActionProfile prof{oracle::random_feasible(rng, spec.firm1(), n),
                         oracle::random_feasible(rng, spec.firm2(), n)};
      for (const Firm f : {Firm::kOne, Firm::kTwo}) {
        const auto g = utility_gradient(f, spec, prof);
        const auto fd = oracle::fd_gradient(f, spec, prof.of(f), prof.of(rival(f)), 1e-6);
        CHECK((g - fd).cwiseAbs().maxCoeff() <= 1e-5);
      }
      ++checked;
    }
  }
  CHECK(checked >= 1000);
}

TEST_CASE("utility matches the reference formula") {
  std::mt19937_64 rng(8);
  for (int s = 0; s < 50; ++s) {
    const auto spec = oracle::random_spec(rng, 1 + s % 9);
    ActionProfile prof{oracle::random_feasible(rng, spec.firm1(), spec.n_agents()),
                       oracle::random_feasible(rng, spec.firm2(), spec.n_agents())};
    CHECK(utility(Firm::kOne, spec, prof) ==
          doctest::Approx(oracle::utility(Firm::kOne, spec, prof.a1, prof.a2)).epsilon(1e-13));
    CHECK(utility(Firm::kTwo, spec, prof) ==
          doctest::Approx(oracle::utility(Firm::kTwo, spec, prof.a2, prof.a1)).epsilon(1e-13));
  }
}

TEST_CASE("market share is conserved without spending costs") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 12;
    Eigen::VectorXd rho(static_cast<Eigen::Index>(n)), x0(static_cast<Eigen::Index>(n));
    for (auto& r : rho) r = 0.1 + 2.0 * u(rng);
    for (auto& x : x0) x = 0.01 + 0.98 * u(rng);
    rho *= static_cast<double>(n) / rho.sum();
    const double gamma = 0.5 + u(rng);
    const FirmParams f{gamma, 0.0, 3.0, 2.0};
    const GameSpec spec(rho, x0, f, f);
    ActionProfile prof{oracle::random_feasible(rng, f, n), oracle::random_feasible(rng, f, n)};
    CHECK(utility(Firm::kOne, spec, prof) + utility(Firm::kTwo, spec, prof) ==
          doctest::Approx(gamma * static_cast<double>(n)).epsilon(1e-12));
  }
}

TEST_CASE("utilities are diagonally concave and separable") {
  std::mt19937_64 rng(23);
  const double h = 1e-3;
  for (int trial = 0; trial < 200; ++trial) {
    const auto spec = oracle::random_spec(rng, 1 + trial % 5);
    const auto n = spec.n_agents();
    // Keep the stencil inside the box.
    Eigen::VectorXd own = oracle::random_feasible(rng, spec.firm1(), n) * 0.9 +
                          Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 2 * h);
    const Eigen::VectorXd other = oracle::random_feasible(rng, spec.firm2(), n);
    const double centre = oracle::utility(Firm::kOne, spec, own, other);
    for (Eigen::Index i = 0; i < own.size(); ++i) {
      Eigen::VectorXd up = own, down = own;
      up(i) += h;
      down(i) -= h;
      const double second = (oracle::utility(Firm::kOne, spec, up, other) - 2 * centre +
                             oracle::utility(Firm::kOne, spec, down, other)) /
                            (h * h);
      CHECK(second < 0.0);
      for (Eigen::Index j = i + 1; j < own.size(); ++j) {
        auto shifted = [&](double di, double dj) {
          Eigen::VectorXd v = own;
          v(i) += di;
          v(j) += dj;
          return oracle::utility(Firm::kOne, spec, v, other);
        };
        const double cross =
            (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
        CHECK(std::abs(cross) <= 1e-6);
      }
    }
  }
}

TEST_CASE("GameSpec validation") {
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(2);
  const FirmParams f{};
  CHECK_THROWS_AS(GameSpec(one, Eigen::Vector2d(0.0, 0.5), f, f), ValidationError);
  CHECK_THROWS_AS(GameSpec(one, Eigen::Vector2d(0.5, 1.0), f, f), ValidationError);
  CHECK_THROWS_AS(GameSpec(Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.5, 0.5), f, f),
                  ValidationError);
  CHECK_THROWS_AS(GameSpec(one, Eigen::VectorXd::Constant(3, 0.5), f, f), ValidationError);
  CHECK_THROWS_AS(GameSpec(one, Eigen::Vector2d(0.5, 0.5), FirmParams{1, 0.1, 1, 2}, f),
                  ValidationError);
  CHECK_THROWS_AS(GameSpec(one, Eigen::Vector2d(0.5, 0.5), f, FirmParams{-1, 0.1, 1, 1}),
                  ValidationError);
  CHECK_NOTHROW(GameSpec(one, Eigen::Vector2d(1e-9, 1 - 1e-9), f, f));
}

TEST_CASE("infeasible profiles are rejected") {
  const GameSpec spec(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Constant(2, 0.5),
                      FirmParams{1, 0.1, 1.0, 0.8}, FirmParams{1, 0.1, 1.0, 0.8});
  const Eigen::VectorXd ok = Eigen::Vector2d(0.5, 0.5);
  CHECK_NOTHROW(utility(Firm::kOne, spec, {ok, ok}));
  CHECK_THROWS_AS(utility(Firm::kOne, spec, {Eigen::Vector2d(0.9, 0.0), ok}), ValidationError);
  CHECK_THROWS_AS(utility(Firm::kOne, spec, {Eigen::Vector2d(0.6, 0.6), ok}), ValidationError);
  CHECK_THROWS_AS(utility(Firm::kTwo, spec, {ok, Eigen::Vector2d(-0.1, 0.0)}), ValidationError);
  CHECK_THROWS_AS(utility(Firm::kTwo, spec, {ok, Eigen::VectorXd::Zero(3)}), ValidationError);
}

TEST_CASE("accurate_sum compensates long sums") {
  Eigen::VectorXd v(2001);
  v(0) = 1e16;
  for (Eigen::Index k = 1; k < 2001; ++k) v(k) = 1.0;
  v(2000) = -1e16;
  CHECK(accurate_sum(v) == 1999.0);
}
