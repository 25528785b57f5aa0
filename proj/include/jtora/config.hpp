#pragma once

// JSON scenario configuration. Every field carries its unit in the key
// name; power may be given in dBm or W, task sizes in bits or decimal
// kilobytes (1 KB = 1000 bytes = 8000 bits), workloads in cycles or
// megacycles. Unknown keys are rejected so typos fail loudly.

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "jtora/scenario.hpp"

namespace jtora {

namespace detail {

class JsonReader {
 public:
  JsonReader(const nlohmann::json& node, std::string prefix)
      : node_(node), prefix_(std::move(prefix)) {
    if (!node_.is_object()) throw ConfigError(prefix_.empty() ? "config" : prefix_, "must be an object");
  }

  template <class T>
  bool get(const char* key, T& out) {
    auto it = node_.find(key);
    if (it == node_.end()) return false;
    try {
      out = it->get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(path(key), "has the wrong type");
    }
    seen_.push_back(key);
    return true;
  }

  bool contains(const char* key) const { return node_.find(key) != node_.end(); }

  const nlohmann::json& object(const char* key) {
    seen_.push_back(key);
    return node_.at(key);
  }

  std::string path(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  void reject_unknown() const {
    for (auto it = node_.begin(); it != node_.end(); ++it)
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        throw ConfigError(path(it.key().c_str()), "unknown field");
  }

 private:
  const nlohmann::json& node_;
  std::string prefix_;
  std::vector<std::string> seen_;
};

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& doc) {
  ScenarioConfig c;
  detail::JsonReader top(doc, "");

  top.get("cells", c.num_cells);
  top.get("inter_bs_distance_km", c.inter_bs_distance_km);
  if (int total = 0; top.get("users_total", total)) c.users_total = total;
  top.get("users_per_cell", c.users_per_cell);
  if (int n = 0; top.get("subbands", n)) c.num_subbands = n;
  top.get("bandwidth_hz", c.bandwidth_hz);
  top.get("noise_dbm", c.noise_dbm);
  top.get("server_cpu_cycles_per_s", c.server_cpu_rate);
  top.get("shadowing_std_db", c.shadowing_std_db);
  top.get("min_distance_km", c.min_distance_km);
  top.get("seed", c.seed);

  if (top.contains("user")) {
    detail::JsonReader user(top.object("user"), "user");
    user.get("local_cpu_cycles_per_s", c.user.local_cpu_rate);
    user.get("energy_coeff", c.user.energy_coeff);
    bool have_dbm = false;
    if (double dbm = 0.0; user.get("max_power_dbm", dbm)) {
      c.user.max_power = dbm_to_watts(dbm);
      have_dbm = true;
    }
    if (double w = 0.0; user.get("max_power_w", w)) {
      if (have_dbm) throw ConfigError("user.max_power_w", "conflicts with user.max_power_dbm");
      c.user.max_power = w;
    }
    bool have_beta_t = user.get("beta_time", c.user.pref_time);
    if (!user.get("beta_energy", c.user.pref_energy) && have_beta_t)
      c.user.pref_energy = 1.0 - c.user.pref_time;
    user.get("provider_weight", c.user.provider_weight);
    user.reject_unknown();
  }

  if (top.contains("task")) {
    detail::JsonReader task(top.object("task"), "task");
    bool have_bits = task.get("input_bits", c.task_input_bits);
    if (double kb = 0.0; task.get("input_kbytes", kb)) {
      if (have_bits) throw ConfigError("task.input_kbytes", "conflicts with task.input_bits");
      c.task_input_bits = kb * 8000.0;  // decimal kilobytes
    }
    bool have_cycles = task.get("workload_cycles", c.task_workload_cycles);
    if (double mc = 0.0; task.get("workload_megacycles", mc)) {
      if (have_cycles)
        throw ConfigError("task.workload_megacycles", "conflicts with task.workload_cycles");
      c.task_workload_cycles = mc * 1e6;
    }
    task.get("workload_cycles_per_cell", c.workload_cycles_per_cell);
    if (std::vector<double> mc; task.get("workload_megacycles_per_cell", mc)) {
      if (!c.workload_cycles_per_cell.empty())
        throw ConfigError("task.workload_megacycles_per_cell",
                          "conflicts with task.workload_cycles_per_cell");
      for (double& v : mc) v *= 1e6;
      c.workload_cycles_per_cell = std::move(mc);
    }
    task.get("input_bits_per_cell", c.input_bits_per_cell);
    if (std::vector<double> kb; task.get("input_kbytes_per_cell", kb)) {
      if (!c.input_bits_per_cell.empty())
        throw ConfigError("task.input_kbytes_per_cell", "conflicts with task.input_bits_per_cell");
      for (double& v : kb) v *= 8000.0;
      c.input_bits_per_cell = std::move(kb);
    }
    task.reject_unknown();
  }

  top.reject_unknown();
  validate(c);
  return c;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config", "invalid JSON in " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace jtora
