#include "netduopoly/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "netduopoly/errors.hpp"
#include "netduopoly/matrix_exp.hpp"

namespace netduopoly {
namespace {

std::string describe(const Edge& e) {
  std::ostringstream os;
  os << "edge (" << e.source << "," << e.target << "," << e.weight << ")";
  return os.str();
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t parse_index(const std::string& field, std::size_t line_no) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(field, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != field.size() || value < 1) {
    throw ValidationError("graph CSV line " + std::to_string(line_no) + ": bad agent index '" +
                          field + "'");
  }
  return static_cast<std::size_t>(value);
}

double parse_weight(const std::string& field, std::size_t line_no) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != field.size()) {
    throw ValidationError("graph CSV line " + std::to_string(line_no) + ": bad weight '" + field +
                          "'");
  }
  return value;
}

std::size_t resolve_count(const std::vector<Edge>& edges, std::optional<std::size_t> n_agents) {
  if (n_agents) return *n_agents;
  std::size_t n = 0;
  for (const auto& e : edges) n = std::max({n, e.source, e.target});
  if (n == 0) {
    throw ValidationError("graph has no edges and no agent count was given");
  }
  return n;
}

}  // namespace

SocialGraph::SocialGraph(std::size_t n_agents, std::vector<Edge> edges)
    : n_agents_(n_agents), edges_(std::move(edges)) {
  if (n_agents_ == 0) {
    throw ValidationError("graph must have at least one agent");
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges_) {
    if (e.source < 1 || e.source > n_agents_ || e.target < 1 || e.target > n_agents_) {
      throw ValidationError(describe(e) + ": agent index outside 1.." + std::to_string(n_agents_));
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      throw ValidationError(describe(e) + ": weight must be positive");
    }
    if (e.source == e.target) {
      throw ValidationError(describe(e) + ": self loop");
    }
    if (!seen.emplace(e.source, e.target).second) {
      throw ValidationError(describe(e) + ": duplicate edge");
    }
  }
}

Laplacian::Laplacian(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw ValidationError("Laplacian must be a nonempty square matrix");
  }
  if (!matrix_.allFinite()) {
    throw ValidationError("Laplacian has non-finite entries");
  }
  const auto n = matrix_.rows();
  for (Eigen::Index m = 0; m < n; ++m) {
    const double scale = std::max(1.0, matrix_(m, m));
    if (std::abs(matrix_.row(m).sum()) > 1e-12 * scale) {
      throw ValidationError("Laplacian row " + std::to_string(m + 1) + " does not sum to zero");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != m && matrix_(m, k) > 0.0) {
        throw ValidationError("Laplacian has a positive off-diagonal entry in row " +
                              std::to_string(m + 1));
      }
    }
  }
}

double Laplacian::inf_norm() const { return matrix_.cwiseAbs().rowwise().sum().maxCoeff(); }

Laplacian build_laplacian(const SocialGraph& graph) {
  const auto n = static_cast<Eigen::Index>(graph.n_agents());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph.edges()) {
    const auto s = static_cast<Eigen::Index>(e.source - 1);
    const auto t = static_cast<Eigen::Index>(e.target - 1);
    l(s, t) = -e.weight;
  }
  // Diagonal as minus the off-diagonal row sum so rows cancel exactly.
  for (Eigen::Index m = 0; m < n; ++m) {
    double off = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != m) off += l(m, k);
    }
    l(m, m) = -off;
  }
  return Laplacian(std::move(l));
}

AipVector compute_aip(const Laplacian& laplacian, double horizon) {
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw ValidationError("AIP horizon T must be positive");
  }
  // exp(-LT) is entrywise nonnegative. Shifting by the largest out-weight
  // makes the argument nonnegative, so small entries keep their relative
  // accuracy instead of cancelling to rounding noise.
  const Eigen::MatrixXd& l = laplacian.matrix();
  const double shift = l.size() > 0 ? l.diagonal().maxCoeff() : 0.0;
  Eigen::MatrixXd flow;
  if (shift * horizon <= 700.0) {
    const Eigen::MatrixXd shifted =
        shift * Eigen::MatrixXd::Identity(l.rows(), l.cols()) - l;
    flow = std::exp(-shift * horizon) * matrix_exponential(shifted, horizon);
  } else {
    flow = matrix_exponential(-l, horizon);
  }
  flow = flow.cwiseMax(0.0);
  return AipVector{flow.colwise().sum().transpose(), horizon};
}

SocialGraph parse_graph_csv(std::istream& in, std::optional<std::size_t> n_agents) {
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    if (!header_seen) {
      std::string compact;
      for (char c : row) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != "source,target,weight") {
        throw ValidationError("graph CSV: expected header 'source,target,weight', got '" + row +
                              "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(row);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 3) {
      throw ValidationError("graph CSV line " + std::to_string(line_no) +
                            ": expected 3 fields, got " + std::to_string(fields.size()));
    }
    edges.push_back({parse_index(fields[0], line_no), parse_index(fields[1], line_no),
                     parse_weight(fields[2], line_no)});
  }
  if (!header_seen) {
    throw ValidationError("graph CSV: missing header");
  }
  const auto n = resolve_count(edges, n_agents);
  return SocialGraph(n, std::move(edges));
}

SocialGraph parse_graph_json(std::istream& in, std::optional<std::size_t> n_agents) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("graph JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array()) {
    throw ValidationError("graph JSON: expected an object with an \"edges\" array");
  }
  std::vector<Edge> edges;
  std::size_t k = 0;
  for (const auto& item : doc["edges"]) {
    ++k;
    if (!item.is_array() || item.size() != 3 || !item[0].is_number_integer() ||
        !item[1].is_number_integer() || !item[2].is_number()) {
      throw ValidationError("graph JSON: edges[" + std::to_string(k - 1) +
                            "] must be [source, target, weight]");
    }
    const auto s = item[0].get<long long>();
    const auto t = item[1].get<long long>();
    if (s < 1 || t < 1) {
      throw ValidationError("graph JSON: edges[" + std::to_string(k - 1) +
                            "] has an index below 1");
    }
    edges.push_back({static_cast<std::size_t>(s), static_cast<std::size_t>(t),
                     item[2].get<double>()});
  }
  if (!n_agents && doc.contains("n")) {
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
      throw ValidationError("graph JSON: \"n\" must be a positive integer");
    }
    n_agents = static_cast<std::size_t>(doc["n"].get<long long>());
  }
  const auto n = resolve_count(edges, n_agents);
  return SocialGraph(n, std::move(edges));
}

SocialGraph load_graph(const std::filesystem::path& path, std::optional<std::size_t> n_agents) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open graph file '" + path.string() + "'");
  }
  if (path.extension() == ".json") return parse_graph_json(in, n_agents);
  return parse_graph_csv(in, n_agents);
}

}  // namespace netduopoly
