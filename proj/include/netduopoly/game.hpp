#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace netduopoly {

// Opinions are kept inside [kOpinionFloor, 1 - kOpinionFloor].
inline constexpr double kOpinionFloor = 1e-9;
// Slack allowed on sum_n a_{i,n} <= B_i.
inline constexpr double kBudgetSlack = 1e-9;

enum class Firm { kOne = 1, kTwo = 2 };

constexpr Firm rival(Firm firm) { return firm == Firm::kOne ? Firm::kTwo : Firm::kOne; }
constexpr int firm_number(Firm firm) { return static_cast<int>(firm); }
// Accepts 1 or 2.
Firm firm_from_number(int number);

/// Per-firm economics: revenue per unit opinion mass, cost per unit spend,
/// total budget B and per-agent cap b (b <= B).
struct FirmParams {
  double gamma = 1.0;
  double lambda = 0.1;
  double budget = 10.0;
  double cap = 10.0;

  void validate() const;
};

/// A full game instance. Opinions x0 are in firm-1 coordinates.
class GameSpec {
 public:
  GameSpec(Eigen::VectorXd rho, Eigen::VectorXd x0, FirmParams firm1, FirmParams firm2);

  std::size_t n_agents() const { return static_cast<std::size_t>(rho_.size()); }
  const Eigen::VectorXd& rho() const { return rho_; }
  const Eigen::VectorXd& x0() const { return x0_; }
  const FirmParams& firm(Firm f) const { return f == Firm::kOne ? firm1_ : firm2_; }
  const FirmParams& firm1() const { return firm1_; }
  const FirmParams& firm2() const { return firm2_; }

  // Initial opinion of agent n in favour of `f` (x0 for firm 1, 1 - x0 for firm 2).
  double opinion_for(Firm f, std::size_t n) const {
    return f == Firm::kOne ? x0_(static_cast<Eigen::Index>(n))
                           : 1.0 - x0_(static_cast<Eigen::Index>(n));
  }

  GameSpec with_firm(Firm f, const FirmParams& params) const;

 private:
  Eigen::VectorXd rho_;
  Eigen::VectorXd x0_;
  FirmParams firm1_;
  FirmParams firm2_;
};

struct ActionProfile {
  Eigen::VectorXd a1;
  Eigen::VectorXd a2;

  static ActionProfile zeros(std::size_t n);
  const Eigen::VectorXd& of(Firm f) const { return f == Firm::kOne ? a1 : a2; }
  Eigen::VectorXd& of(Firm f) { return f == Firm::kOne ? a1 : a2; }
};

// Throws ValidationError unless 0 <= a_n <= cap and sum a_n <= budget + kBudgetSlack.
void validate_action(const FirmParams& params, const Eigen::VectorXd& action, std::size_t n_agents,
                     const char* what);
void validate_profile(const GameSpec& spec, const ActionProfile& profile);

/// Campaign opinion update (x0 + a1) / (1 + a1 + a2), in firm-1 coordinates.
double campaign_update(double x0, double a1, double a2);

/// Net revenue of `firm`: gamma * sum rho_n x_n(0+) - lambda * sum a_n, with
/// x(0+) taken in that firm's coordinates.
double utility(Firm firm, const GameSpec& spec, const ActionProfile& profile);

/// d u_i / d a_{i,n} = gamma rho_n (x_{0,n;-i} + a_{-i,n}) / (1 + a_{i,n} + a_{-i,n})^2 - lambda.
Eigen::VectorXd utility_gradient(Firm firm, const GameSpec& spec, const ActionProfile& profile);

// Sum with Neumaier compensation when the range is longer than 1000 terms.
double accurate_sum(const Eigen::VectorXd& terms);

}  // namespace netduopoly
