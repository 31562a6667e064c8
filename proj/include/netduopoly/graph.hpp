#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace netduopoly {

inline constexpr double kDefaultHorizon = 10.0;

/// Directed edge with 1-based agent indices. `weight` is the attention the
/// source agent pays to the target's opinion.
struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;
};

/// Weighted directed influence graph over agents 1..N.
///
/// The constructor rejects out-of-range indices, nonpositive or non-finite
/// weights, self loops and duplicate (source, target) pairs.
class SocialGraph {
 public:
  SocialGraph(std::size_t n_agents, std::vector<Edge> edges);

  std::size_t n_agents() const { return n_agents_; }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  std::size_t n_agents_;
  std::vector<Edge> edges_;
};

/// Graph Laplacian: zero row sums, nonpositive off-diagonal entries.
class Laplacian {
 public:
  // Validates the Laplacian structure of an arbitrary dense matrix.
  explicit Laplacian(Eigen::MatrixXd matrix);

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
  // Max absolute row sum.
  double inf_norm() const;

 private:
  Eigen::MatrixXd matrix_;
};

/// Agent influence power rho = 1^T exp(-L T) at horizon T.
struct AipVector {
  Eigen::VectorXd rho;
  double horizon = kDefaultHorizon;
};

Laplacian build_laplacian(const SocialGraph& graph);

AipVector compute_aip(const Laplacian& laplacian, double horizon = kDefaultHorizon);

// Graph files. CSV has a `source,target,weight` header; the JSON form is
// {"n": N, "edges": [[s, t, w], ...]}. Without an explicit count N is the
// largest index seen.
SocialGraph parse_graph_csv(std::istream& in, std::optional<std::size_t> n_agents = std::nullopt);
SocialGraph parse_graph_json(std::istream& in, std::optional<std::size_t> n_agents = std::nullopt);
// Dispatches on the file extension (.json, anything else is CSV).
SocialGraph load_graph(const std::filesystem::path& path,
                       std::optional<std::size_t> n_agents = std::nullopt);

}  // namespace netduopoly
