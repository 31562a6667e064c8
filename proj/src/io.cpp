#include "netduopoly/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "netduopoly/errors.hpp"

namespace netduopoly {
namespace {

double number_field(const Json& doc, const std::string& owner, const char* key) {
  if (!doc.contains(key)) {
    throw ValidationError(owner + ": missing field \"" + key + "\"");
  }
  const auto& v = doc.at(key);
  if (!v.is_number()) {
    throw ValidationError(owner + "." + key + " must be a number");
  }
  return v.get<double>();
}

Eigen::VectorXd number_array(const Json& doc, const std::string& name) {
  if (!doc.is_array()) {
    throw ValidationError(name + " must be an array of numbers");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(doc.size()));
  for (std::size_t k = 0; k < doc.size(); ++k) {
    if (!doc[k].is_number()) {
      throw ValidationError(name + "[" + std::to_string(k + 1) + "] is not a number");
    }
    v(static_cast<Eigen::Index>(k)) = doc[k].get<double>();
  }
  return v;
}

Json one_based(const std::vector<std::size_t>& set) {
  Json out = Json::array();
  for (const auto k : set) out.push_back(k + 1);
  return out;
}

void dump_into(const Json& j, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) { return std::string(static_cast<std::size_t>(indent * d), ' '); };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += pad(depth + 1) + Json(it.key()).dump() + ": ";
        dump_into(it.value(), indent, depth + 1, out);
        out += k + 1 < j.size() ? ",\n" : "\n";
      }
      out += pad(depth) + "}";
      return;
    }
    case Json::value_t::array: {
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += flat ? "[" : "[\n";
      std::size_t k = 0;
      for (const auto& e : j) {
        if (!flat) out += pad(depth + 1);
        dump_into(e, indent, depth + 1, out);
        if (++k < j.size()) out += flat ? ", " : ",\n";
      }
      out += flat ? "]" : "\n" + pad(depth) + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v, 17) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string format_number(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
  return buf;
}

std::string dump_json(const Json& doc, int indent) {
  std::string out;
  dump_into(doc, indent, 0, out);
  out += "\n";
  return out;
}

FirmParams parse_firm(const Json& doc, const std::string& name) {
  if (!doc.is_object()) {
    throw ValidationError(name + " must be an object");
  }
  FirmParams f;
  f.gamma = number_field(doc, name, "gamma");
  f.lambda = number_field(doc, name, "lambda");
  f.budget = number_field(doc, name, "B");
  f.cap = number_field(doc, name, "b");
  return f;
}

Json firm_to_json(const FirmParams& firm) {
  return Json{{"gamma", firm.gamma}, {"lambda", firm.lambda}, {"B", firm.budget}, {"b", firm.cap}};
}

LoadedSpec parse_game_spec(const Json& doc, const std::filesystem::path& base_dir,
                           std::optional<double> horizon_override) {
  if (!doc.is_object()) {
    throw ValidationError("game spec must be a JSON object");
  }
  for (const char* key : {"rho", "x0", "firm1", "firm2"}) {
    if (!doc.contains(key)) {
      throw ValidationError(std::string("game spec: missing field \"") + key + "\"");
    }
  }
  const Eigen::VectorXd x0 = number_array(doc["x0"], "x0");
  const FirmParams f1 = parse_firm(doc["firm1"], "firm1");
  const FirmParams f2 = parse_firm(doc["firm2"], "firm2");

  const auto& rho_doc = doc["rho"];
  if (rho_doc.is_array()) {
    return LoadedSpec{GameSpec(number_array(rho_doc, "rho"), x0, f1, f2), std::nullopt,
                      std::nullopt};
  }
  if (!rho_doc.is_object() || !rho_doc.contains("graph_file") ||
      !rho_doc["graph_file"].is_string()) {
    throw ValidationError("rho must be an array or {\"graph_file\": ..., \"T\": ...}");
  }
  std::filesystem::path graph_path = rho_doc["graph_file"].get<std::string>();
  if (graph_path.is_relative()) graph_path = base_dir / graph_path;
  double horizon = kDefaultHorizon;
  if (rho_doc.contains("T")) horizon = number_field(rho_doc, "rho", "T");
  if (horizon_override) horizon = *horizon_override;
  std::optional<std::size_t> n_agents;
  if (rho_doc.contains("n")) n_agents = static_cast<std::size_t>(number_field(rho_doc, "rho", "n"));
  if (!n_agents) n_agents = static_cast<std::size_t>(x0.size());

  const auto graph = load_graph(graph_path, n_agents);
  const auto aip = compute_aip(build_laplacian(graph), horizon);
  return LoadedSpec{GameSpec(aip.rho, x0, f1, f2), graph_path, horizon};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open '" + path.string() + "'");
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("'" + path.string() + "': " + e.what());
  }
}

LoadedSpec load_game_spec(const std::filesystem::path& path,
                          std::optional<double> horizon_override) {
  return parse_game_spec(read_json_file(path), path.parent_path(), horizon_override);
}

ActionProfile parse_profile(const Json& doc) {
  if (doc.is_object() && doc.contains("profile")) return parse_profile(doc["profile"]);
  if (!doc.is_object() || !doc.contains("a1") || !doc.contains("a2")) {
    throw ValidationError("profile must be an object with \"a1\" and \"a2\" arrays");
  }
  return ActionProfile{number_array(doc["a1"], "a1"), number_array(doc["a2"], "a2")};
}

Eigen::VectorXd parse_action(const Json& doc) {
  if (doc.is_object() && doc.contains("action")) return number_array(doc["action"], "action");
  return number_array(doc, "action");
}

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (const double x : v) out.push_back(x);
  return out;
}

Json to_json(const ActionProfile& profile) {
  return Json{{"a1", to_json(profile.a1)}, {"a2", to_json(profile.a2)}};
}

Json to_json(const EquilibriumResult& r) {
  Json regimes = Json::array();
  for (const auto g : r.regime) regimes.push_back(std::string(regime_name(g)));
  return Json{{"converged", r.converged},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"final_damping", r.final_damping},
              {"utilities", Json{{"u1", r.utilities[0]}, {"u2", r.utilities[1]}}},
              {"mu0", Json{{"firm1", r.mu0[0]}, {"firm2", r.mu0[1]}}},
              {"profile", to_json(r.profile)},
              {"regime", regimes}};
}

Json to_json(const BestResponseResult& r) {
  return Json{{"action", to_json(r.action)},
              {"mu0", r.mu0},
              {"utility", r.utility},
              {"W0", one_based(r.zero_set)},
              {"W1", one_based(r.cap_set)},
              {"W2", one_based(r.interior_set)}};
}

Json to_json(const NeCheck& c) {
  return Json{{"is_ne", c.is_ne},
              {"residual", c.residual},
              {"gain", Json{{"firm1", c.gain[0]}, {"firm2", c.gain[1]}}}};
}

RunMetadata::RunMetadata(std::string command) {
  entries_.emplace_back("tool", std::string(kToolName) + " " + kToolVersion);
  entries_.emplace_back("command", std::move(command));
}

void RunMetadata::add(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void RunMetadata::add(std::string key, double value) {
  entries_.emplace_back(std::move(key), format_number(value, 17));
}

std::string RunMetadata::config_hash() const {
  std::string text;
  for (const auto& [k, v] : entries_) text += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a(text));
  return buf;
}

std::string RunMetadata::csv_header() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += "# " + k + ": " + v + "\n";
  out += "# config_hash: " + config_hash() + "\n";
  return out;
}

Json RunMetadata::json() const {
  Json out = Json::object();
  for (const auto& [k, v] : entries_) out[k] = v;
  out["config_hash"] = config_hash();
  return out;
}

std::string aip_csv(const AipVector& aip, const RunMetadata& meta) {
  std::string out = meta.csv_header() + "agent,rho\n";
  for (Eigen::Index k = 0; k < aip.rho.size(); ++k) {
    out += std::to_string(k + 1) + "," + format_number(aip.rho(k), 9) + "\n";
  }
  return out;
}

std::string trajectory_csv(const Trajectory& traj, const RunMetadata& meta) {
  std::string out = meta.csv_header() + "t";
  const auto n = traj.x0_plus.size();
  for (Eigen::Index k = 0; k < n; ++k) out += ",x_" + std::to_string(k + 1);
  out += "\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    out += format_number(traj.times[s], 9);
    for (Eigen::Index k = 0; k < n; ++k) out += "," + format_number(traj.states[s](k), 9);
    out += "\n";
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep, const RunMetadata& meta) {
  std::string out = meta.csv_header() + "C,leader_fraction,leaders,got,u_br,u_uba\n";
  for (const auto& r : sweep.rows) {
    out += format_number(r.leader_aip, 9) + "," + format_number(r.leader_fraction, 9) + "," +
           std::to_string(r.leaders) + "," + format_number(r.got, 9) + "," +
           format_number(r.u_br, 9) + "," + format_number(r.u_uba, 9) + "\n";
  }
  return out;
}

std::string report_csv(const NeReport& report, const RunMetadata& meta) {
  std::string out = meta.csv_header() + "agent,rho,x0,a1,a2,regime\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.agent) + "," + format_number(r.rho, 9) + "," +
           format_number(r.x0, 9) + "," + format_number(r.a1, 9) + "," +
           format_number(r.a2, 9) + "," + std::string(regime_name(r.regime)) + "\n";
  }
  return out;
}

}  // namespace netduopoly
