#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "netduopoly/analysis.hpp"
#include "netduopoly/best_response.hpp"
#include "netduopoly/dynamics.hpp"
#include "netduopoly/equilibrium.hpp"
#include "netduopoly/game.hpp"
#include "netduopoly/graph.hpp"

namespace netduopoly {

inline constexpr const char* kToolName = "netduopoly";
inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::ordered_json;

struct LoadedSpec {
  GameSpec spec;
  // Set when rho was derived from a graph file.
  std::optional<std::filesystem::path> graph_file;
  std::optional<double> horizon;
};

/// GameSpec document. "rho" is either an array or {"graph_file": path, "T": horizon};
/// a relative graph path resolves against `base_dir`. `horizon_override`
/// replaces the file's T.
LoadedSpec parse_game_spec(const Json& doc, const std::filesystem::path& base_dir,
                           std::optional<double> horizon_override = std::nullopt);
LoadedSpec load_game_spec(const std::filesystem::path& path,
                          std::optional<double> horizon_override = std::nullopt);

FirmParams parse_firm(const Json& doc, const std::string& name);
Json firm_to_json(const FirmParams& firm);

// Accepts {"a1": [...], "a2": [...]} or an `ne` result with a "profile" member.
ActionProfile parse_profile(const Json& doc);
// A bare array, or {"action": [...]}.
Eigen::VectorXd parse_action(const Json& doc);
Json read_json_file(const std::filesystem::path& path);

Json to_json(const Eigen::VectorXd& v);
Json to_json(const ActionProfile& profile);
Json to_json(const EquilibriumResult& result);
Json to_json(const BestResponseResult& result);  // index sets 1-based
Json to_json(const NeCheck& check);

/// JSON text with every floating-point number at 17 significant digits.
std::string dump_json(const Json& doc, int indent = 2);

// printf("%.<digits>g")
std::string format_number(double value, int digits);

/// Ordered key/value run parameters, echoed as `# key: value` lines (CSV) or a
/// "meta" object (JSON), closed by a 64-bit FNV-1a hash of the lines.
class RunMetadata {
 public:
  explicit RunMetadata(std::string command);
  void add(std::string key, std::string value);
  void add(std::string key, double value);
  std::string config_hash() const;
  std::string csv_header() const;
  Json json() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string aip_csv(const AipVector& aip, const RunMetadata& meta);
std::string trajectory_csv(const Trajectory& traj, const RunMetadata& meta);
std::string sweep_csv(const SweepResult& sweep, const RunMetadata& meta);
std::string report_csv(const NeReport& report, const RunMetadata& meta);

}  // namespace netduopoly
