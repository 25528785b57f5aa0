#pragma once

// Reproducible network scenarios: hexagonal BS layout, uniform user
// placement inside each cell, distance-dependent path loss with log-normal
// shadowing. generate() is a pure function of (config, seed).

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jtora/model.hpp"
#include "jtora/rng.hpp"

namespace jtora {

struct ConfigError : std::invalid_argument {
  std::string field;
  ConfigError(std::string field_, const std::string& message)
      : std::invalid_argument(field_ + ": " + message), field(std::move(field_)) {}
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

struct ScenarioConfig {
  int num_cells = 7;
  double inter_bs_distance_km = 1.0;
  // Exactly one of users_per_cell / users_total is used; users_total wins
  // when set and assigns users to cells round-robin.
  int users_per_cell = 2;
  std::optional<int> users_total;
  // Defaults to users per cell when unset.
  std::optional<int> num_subbands;

  double bandwidth_hz = 20e6;
  double noise_dbm = -100.0;
  double server_cpu_rate = 20e9;  // cycles/s

  UserParams user;                 // max_power in W; see config loader for the dBm knob
  double task_input_bits = 3.36e6;      // 420 * 1000 * 8 (decimal kilobytes)
  double task_workload_cycles = 1e9;
  std::vector<double> workload_cycles_per_cell;  // optional non-uniform override
  std::vector<double> input_bits_per_cell;       // optional non-uniform override

  double shadowing_std_db = 8.0;
  double min_distance_km = 0.01;
  std::uint64_t seed = 1;
};

inline int total_users(const ScenarioConfig& c) {
  return c.users_total ? *c.users_total : c.users_per_cell * c.num_cells;
}

inline int effective_subbands(const ScenarioConfig& c) {
  if (c.num_subbands) return *c.num_subbands;
  if (c.users_total)
    throw ConfigError("num_subbands", "must be set explicitly when users_total is used");
  return c.users_per_cell;
}

inline void validate(const ScenarioConfig& c) {
  if (c.num_cells < 1) throw ConfigError("num_cells", "must be >= 1");
  if (!(c.inter_bs_distance_km > 0.0)) throw ConfigError("inter_bs_distance_km", "must be > 0");
  if (c.users_total && *c.users_total < 1) throw ConfigError("users_total", "must be >= 1");
  if (!c.users_total && c.users_per_cell < 1) throw ConfigError("users_per_cell", "must be >= 1");
  if (effective_subbands(c) < 1) throw ConfigError("num_subbands", "must be >= 1");
  if (!(c.bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz", "must be > 0");
  if (!(c.server_cpu_rate > 0.0)) throw ConfigError("server_cpu_rate", "must be > 0");
  if (!(c.user.local_cpu_rate > 0.0)) throw ConfigError("user.local_cpu_rate", "must be > 0");
  if (!(c.user.energy_coeff > 0.0)) throw ConfigError("user.energy_coeff", "must be > 0");
  if (!(c.user.max_power > 0.0)) throw ConfigError("user.max_power", "must be > 0");
  if (c.user.pref_time < 0.0 || c.user.pref_time > 1.0)
    throw ConfigError("user.pref_time", "must lie in [0, 1]");
  if (std::abs(c.user.pref_time + c.user.pref_energy - 1.0) > 1e-12)
    throw ConfigError("user.pref_energy", "pref_time + pref_energy must equal 1");
  if (!(c.user.provider_weight > 0.0) || c.user.provider_weight > 1.0)
    throw ConfigError("user.provider_weight", "must lie in (0, 1]");
  if (!(c.task_input_bits > 0.0)) throw ConfigError("task_input_bits", "must be > 0");
  if (!(c.task_workload_cycles > 0.0)) throw ConfigError("task_workload_cycles", "must be > 0");
  if (!c.workload_cycles_per_cell.empty() &&
      c.workload_cycles_per_cell.size() != static_cast<std::size_t>(c.num_cells))
    throw ConfigError("workload_cycles_per_cell", "must list one value per cell");
  if (!c.input_bits_per_cell.empty() &&
      c.input_bits_per_cell.size() != static_cast<std::size_t>(c.num_cells))
    throw ConfigError("input_bits_per_cell", "must list one value per cell");
  if (c.shadowing_std_db < 0.0) throw ConfigError("shadowing_std_db", "must be >= 0");
  if (!(c.min_distance_km > 0.0)) throw ConfigError("min_distance_km", "must be > 0");
}

// BS positions on a hexagonal lattice: the first BS at the origin, then
// rings of 6r positions each, filled ring by ring in a fixed angular order.
// Any count is allowed; a partial outer ring is truncated.
inline std::vector<Vec2> hex_layout(int num_cells, double spacing_km) {
  if (num_cells < 1) throw std::invalid_argument("hex_layout: num_cells must be >= 1");
  if (!(spacing_km > 0.0)) throw std::invalid_argument("hex_layout: spacing must be > 0");
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(num_cells));
  out.push_back({0.0, 0.0});
  // Unit steps towards the six neighbors, 60 degrees apart.
  constexpr double kSqrt3Half = 0.86602540378443864676;
  const Vec2 dirs[6] = {{1.0, 0.0},  {0.5, kSqrt3Half},  {-0.5, kSqrt3Half},
                        {-1.0, 0.0}, {-0.5, -kSqrt3Half}, {0.5, -kSqrt3Half}};
  for (int ring = 1; static_cast<int>(out.size()) < num_cells; ++ring) {
    // Walk the ring: start at ring * dirs[0], then take `ring` steps along
    // each successive direction rotated by 120 degrees from the spoke.
    Vec2 pos{dirs[0].x * ring, dirs[0].y * ring};
    for (int side = 0; side < 6 && static_cast<int>(out.size()) < num_cells; ++side) {
      const Vec2& step = dirs[(side + 2) % 6];
      for (int i = 0; i < ring && static_cast<int>(out.size()) < num_cells; ++i) {
        out.push_back({pos.x * spacing_km, pos.y * spacing_km});
        pos.x += step.x;
        pos.y += step.y;
      }
    }
  }
  return out;
}

inline double pathloss_db(double distance_km) {
  if (!(distance_km > 0.0)) throw std::domain_error("pathloss_db: distance must be > 0");
  return 140.7 + 36.7 * std::log10(distance_km);
}

namespace detail {

// Hexagonal cell area around a BS: flat edges face each neighbor, so the
// inradius is half the BS spacing and the three edge normals sit at 0, 60
// and 120 degrees.
inline bool inside_hex(Vec2 p, double spacing_km) {
  constexpr double kSqrt3Half = 0.86602540378443864676;
  double inradius = spacing_km / 2.0;
  double a = std::abs(p.x);
  double b = std::abs(0.5 * p.x + kSqrt3Half * p.y);
  double c = std::abs(-0.5 * p.x + kSqrt3Half * p.y);
  return a <= inradius && b <= inradius && c <= inradius;
}

inline Vec2 sample_in_hex(SplitMix64& rng, Vec2 center, double spacing_km) {
  double circumradius = spacing_km / 1.7320508075688772;  // spacing / sqrt(3)
  for (;;) {
    Vec2 p{(2.0 * rng.next_double() - 1.0) * circumradius,
           (2.0 * rng.next_double() - 1.0) * circumradius};
    if (inside_hex(p, spacing_km)) return {center.x + p.x, center.y + p.y};
  }
}

}  // namespace detail

// Cell a user belongs to for placement purposes (round-robin when the
// config pins the total count, block-wise otherwise).
inline int placement_cell(const ScenarioConfig& c, int user_index) {
  if (c.users_total) return user_index % c.num_cells;
  return user_index / c.users_per_cell;
}

inline NetworkScenario generate(const ScenarioConfig& config, std::uint64_t seed) {
  validate(config);
  const int num_users = total_users(config);
  const int num_servers = config.num_cells;
  const int subbands = effective_subbands(config);

  std::vector<Vec2> bs = hex_layout(config.num_cells, config.inter_bs_distance_km);
  std::vector<EdgeServer> servers;
  servers.reserve(static_cast<std::size_t>(num_servers));
  for (int s = 0; s < num_servers; ++s) servers.emplace_back(s, bs[s], config.server_cpu_rate);

  // Stream 0: user positions. Stream 1: shadowing. Kept separate so the
  // placement draws do not shift when the shadowing loop changes shape.
  SplitMix64 place_rng(derive_seed(seed, 0));
  SplitMix64 shadow_rng(derive_seed(seed, 1));

  std::vector<UserDevice> users;
  users.reserve(static_cast<std::size_t>(num_users));
  for (int u = 0; u < num_users; ++u) {
    int cell = placement_cell(config, u);
    Vec2 pos = detail::sample_in_hex(place_rng, bs[cell], config.inter_bs_distance_km);
    double workload = config.workload_cycles_per_cell.empty()
                          ? config.task_workload_cycles
                          : config.workload_cycles_per_cell[cell];
    double bits = config.input_bits_per_cell.empty() ? config.task_input_bits
                                                     : config.input_bits_per_cell[cell];
    users.emplace_back(u, pos, TaskProfile(bits, workload), config.user);
  }

  std::vector<double> gains;
  gains.reserve(static_cast<std::size_t>(num_users) * num_servers);
  for (int u = 0; u < num_users; ++u) {
    for (int s = 0; s < num_servers; ++s) {
      double d = std::max(distance(users[u].position, bs[s]), config.min_distance_km);
      double loss_db = pathloss_db(d) + config.shadowing_std_db * shadow_rng.next_normal();
      gains.push_back(std::pow(10.0, -loss_db / 10.0));
    }
  }

  RadioConfig radio(config.bandwidth_hz, subbands, dbm_to_watts(config.noise_dbm));
  return NetworkScenario(std::move(users), std::move(servers),
                         ChannelGains(num_users, num_servers, std::move(gains)), radio);
}

inline NetworkScenario generate(const ScenarioConfig& config) { return generate(config, config.seed); }

// FNV-1a over the byte images of positions, gains and radio parameters.
// Used to verify that paired schemes really saw the same realization.
inline std::uint64_t scenario_hash(const NetworkScenario& scen) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof v);
    __builtin_memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& u : scen.users) {
    mix(u.position.x);
    mix(u.position.y);
    mix(u.task.input_bits);
    mix(u.task.workload_cycles);
  }
  for (const auto& s : scen.servers) {
    mix(s.position.x);
    mix(s.position.y);
    mix(s.cpu_rate);
  }
  for (double g : scen.gains.values()) mix(g);
  mix(scen.radio.total_bandwidth);
  mix(static_cast<double>(scen.radio.num_subbands));
  mix(scen.radio.noise_power);
  return h;
}

}  // namespace jtora
