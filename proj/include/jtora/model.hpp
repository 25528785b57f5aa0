#pragma once

// Domain types and the pure evaluation functions of the system model:
// everything needed to score one candidate (assignment, powers, compute
// rates) triple. Units are strictly SI throughout (W, Hz, bits, cycles,
// seconds, joules); dB / dBm appear only at configuration boundaries.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jtora {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// A computation task: input payload to upload and CPU work to execute.
struct TaskProfile {
  double input_bits;
  double workload_cycles;

  TaskProfile(double input_bits_, double workload_cycles_)
      : input_bits(input_bits_), workload_cycles(workload_cycles_) {
    if (!(input_bits > 0.0)) throw std::invalid_argument("TaskProfile: input_bits must be > 0");
    if (!(workload_cycles > 0.0))
      throw std::invalid_argument("TaskProfile: workload_cycles must be > 0");
  }
};

// Device and preference knobs of a user; defaults follow the common
// configuration used by the bundled presets.
struct UserParams {
  double local_cpu_rate = 1e9;     // cycles/s
  double energy_coeff = 5e-27;     // J*s^2/cycles^3
  double max_power = 0.1;          // W
  double pref_time = 0.2;          // weight on completion-time improvement
  double pref_energy = 0.8;        // weight on energy improvement
  double provider_weight = 1.0;    // operator preference, in (0, 1]
  double amp_efficiency = 1.0;     // power-amplifier efficiency
};

struct UserDevice {
  int id;
  Vec2 position;  // km
  double local_cpu_rate;
  double energy_coeff;
  double max_power;
  double pref_time;
  double pref_energy;
  double provider_weight;
  double amp_efficiency;
  TaskProfile task;

  UserDevice(int id_, Vec2 position_, TaskProfile task_, const UserParams& p = {})
      : id(id_),
        position(position_),
        local_cpu_rate(p.local_cpu_rate),
        energy_coeff(p.energy_coeff),
        max_power(p.max_power),
        pref_time(p.pref_time),
        pref_energy(p.pref_energy),
        provider_weight(p.provider_weight),
        amp_efficiency(p.amp_efficiency),
        task(task_) {
    if (!(local_cpu_rate > 0.0)) throw std::invalid_argument("UserDevice: local_cpu_rate must be > 0");
    if (!(energy_coeff > 0.0)) throw std::invalid_argument("UserDevice: energy_coeff must be > 0");
    if (!(max_power > 0.0)) throw std::invalid_argument("UserDevice: max_power must be > 0");
    if (pref_time < 0.0 || pref_time > 1.0 || pref_energy < 0.0 || pref_energy > 1.0)
      throw std::invalid_argument("UserDevice: preference weights must lie in [0, 1]");
    if (std::abs(pref_time + pref_energy - 1.0) > 1e-12)
      throw std::invalid_argument("UserDevice: pref_time + pref_energy must equal 1");
    if (!(provider_weight > 0.0) || provider_weight > 1.0)
      throw std::invalid_argument("UserDevice: provider_weight must lie in (0, 1]");
    if (!(amp_efficiency > 0.0)) throw std::invalid_argument("UserDevice: amp_efficiency must be > 0");
  }
};

struct EdgeServer {
  int id;
  Vec2 position;    // km
  double cpu_rate;  // cycles/s

  EdgeServer(int id_, Vec2 position_, double cpu_rate_)
      : id(id_), position(position_), cpu_rate(cpu_rate_) {
    if (!(cpu_rate > 0.0)) throw std::invalid_argument("EdgeServer: cpu_rate must be > 0");
  }
};

struct RadioConfig {
  double total_bandwidth;  // Hz
  int num_subbands;
  double subband_width;  // Hz, = total_bandwidth / num_subbands
  double noise_power;    // W

  RadioConfig(double total_bandwidth_, int num_subbands_, double noise_power_)
      : total_bandwidth(total_bandwidth_),
        num_subbands(num_subbands_),
        subband_width(total_bandwidth_ / num_subbands_),
        noise_power(noise_power_) {
    if (!(total_bandwidth > 0.0)) throw std::invalid_argument("RadioConfig: total_bandwidth must be > 0");
    if (num_subbands < 1) throw std::invalid_argument("RadioConfig: num_subbands must be >= 1");
    if (!(noise_power > 0.0)) throw std::invalid_argument("RadioConfig: noise_power must be > 0");
  }
};

// Linear power gain per (user, server) pair. Fast fading is averaged out,
// so the gain is identical across sub-bands; the sub-band index only
// determines which users interfere with each other.
class ChannelGains {
 public:
  ChannelGains(std::size_t num_users, std::size_t num_servers, std::vector<double> values)
      : users_(num_users), servers_(num_servers), values_(std::move(values)) {
    if (values_.size() != users_ * servers_)
      throw std::invalid_argument("ChannelGains: value count does not match dimensions");
    for (double v : values_)
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("ChannelGains: gains must be finite and > 0");
  }

  double operator()(int user, int server) const {
    return values_[static_cast<std::size_t>(user) * servers_ + static_cast<std::size_t>(server)];
  }

  std::size_t num_users() const { return users_; }
  std::size_t num_servers() const { return servers_; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t users_;
  std::size_t servers_;
  std::vector<double> values_;
};

// Everything a scheduler needs to know about one network realization.
struct NetworkScenario {
  std::vector<UserDevice> users;
  std::vector<EdgeServer> servers;
  ChannelGains gains;
  RadioConfig radio;

  NetworkScenario(std::vector<UserDevice> users_, std::vector<EdgeServer> servers_,
                  ChannelGains gains_, RadioConfig radio_)
      : users(std::move(users_)),
        servers(std::move(servers_)),
        gains(std::move(gains_)),
        radio(radio_) {
    if (gains.num_users() != users.size() || gains.num_servers() != servers.size())
      throw std::invalid_argument("NetworkScenario: gain matrix dimensions do not match");
  }

  int num_users() const { return static_cast<int>(users.size()); }
  int num_servers() const { return static_cast<int>(servers.size()); }
};

// One offloading decision: user -> (server, sub-band).
struct OffloadTriple {
  int user;
  int server;
  int subband;

  friend auto operator<=>(const OffloadTriple&, const OffloadTriple&) = default;
};

// The offloading decision set. Two independence constraints hold at all
// times: a user appears in at most one triple, and a (server, sub-band)
// slot carries at most one user. Triples are kept sorted so equal sets
// compare equal and iteration order is canonical.
class Assignment {
 public:
  Assignment() = default;

  explicit Assignment(std::vector<OffloadTriple> triples) : triples_(std::move(triples)) {
    std::sort(triples_.begin(), triples_.end());
    if (!feasible(triples_)) throw std::invalid_argument("Assignment: matroid constraints violated");
  }

  static bool feasible(std::span<const OffloadTriple> triples) {
    for (std::size_t i = 0; i < triples.size(); ++i) {
      for (std::size_t k = i + 1; k < triples.size(); ++k) {
        if (triples[i].user == triples[k].user) return false;
        if (triples[i].server == triples[k].server && triples[i].subband == triples[k].subband)
          return false;
      }
    }
    return true;
  }

  const std::vector<OffloadTriple>& triples() const { return triples_; }
  bool empty() const { return triples_.empty(); }
  std::size_t size() const { return triples_.size(); }

  bool contains(const OffloadTriple& t) const {
    return std::binary_search(triples_.begin(), triples_.end(), t);
  }

  // nullptr when the user runs its task locally.
  const OffloadTriple* triple_for_user(int user) const {
    for (const auto& t : triples_)
      if (t.user == user) return &t;
    return nullptr;
  }

  bool offloaded(int user) const { return triple_for_user(user) != nullptr; }

  // -1 when the slot is free.
  int user_in_slot(int server, int subband) const {
    for (const auto& t : triples_)
      if (t.server == server && t.subband == subband) return t.user;
    return -1;
  }

  Assignment with(const OffloadTriple& t) const {
    std::vector<OffloadTriple> next = triples_;
    next.push_back(t);
    return Assignment(std::move(next));
  }

  Assignment without(const OffloadTriple& t) const {
    std::vector<OffloadTriple> next;
    next.reserve(triples_.size());
    for (const auto& e : triples_)
      if (e != t) next.push_back(e);
    Assignment out;
    out.triples_ = std::move(next);  // removal cannot break independence
    return out;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<OffloadTriple> triples_;
};

// Per-user uplink transmit power [W]; zero for users that run locally.
struct PowerAllocation {
  std::vector<double> watts;

  explicit PowerAllocation(std::size_t num_users = 0) : watts(num_users, 0.0) {}
};

// Per-user compute rate [cycles/s] granted by the serving server; zero for
// users that run locally. The (user, server) pairing lives in the Assignment.
struct ComputeAllocation {
  std::vector<double> rate;

  explicit ComputeAllocation(std::size_t num_users = 0) : rate(num_users, 0.0) {}
};

struct UtilityReport {
  std::vector<double> per_user_utility;
  std::vector<double> per_user_delay;   // t_u when offloaded, local completion time otherwise
  std::vector<double> per_user_energy;  // E_u when offloaded, local energy otherwise
  double system_utility = 0.0;
};

// ---------------------------------------------------------------------------
// Local execution

inline double local_completion_time(const UserDevice& user) {
  return user.task.workload_cycles / user.local_cpu_rate;
}

inline double local_energy(const UserDevice& user) {
  return user.energy_coeff * user.local_cpu_rate * user.local_cpu_rate * user.task.workload_cycles;
}

// ---------------------------------------------------------------------------
// Uplink SINR and rate

// Whether inter-cell interference is evaluated at the actual transmit
// powers or at every interferer's power budget (the decoupling bound used
// by the power-allocation solver).
enum class SinrModel { Exact, MaxPowerInterference };

// Interference received at `server` on `subband` from users served by other
// servers on the same sub-band. Users of the same server never interfere:
// they hold distinct sub-bands.
inline double intercell_interference(const NetworkScenario& scen, const Assignment& x,
                                     int server, int subband, const PowerAllocation& p) {
  double sum = 0.0;
  for (const auto& t : x.triples()) {
    if (t.server == server || t.subband != subband) continue;
    sum += p.watts[t.user] * scen.gains(t.user, server);
  }
  return sum;
}

inline double intercell_interference_bound(const NetworkScenario& scen, const Assignment& x,
                                           int server, int subband) {
  double sum = 0.0;
  for (const auto& t : x.triples()) {
    if (t.server == server || t.subband != subband) continue;
    sum += scen.users[t.user].max_power * scen.gains(t.user, server);
  }
  return sum;
}

// SINR of user -> server on the given sub-band. Zero when the triple is not
// part of the assignment (an absent decision carries no signal).
inline double exact_sinr(const NetworkScenario& scen, const Assignment& x,
                         const PowerAllocation& p, int user, int server, int subband) {
  if (!x.contains({user, server, subband})) return 0.0;
  double interference = intercell_interference(scen, x, server, subband, p);
  return p.watts[user] * scen.gains(user, server) / (interference + scen.radio.noise_power);
}

inline double sinr(const NetworkScenario& scen, const Assignment& x, const PowerAllocation& p,
                   int user, int server, int subband, SinrModel model) {
  if (model == SinrModel::Exact) return exact_sinr(scen, x, p, user, server, subband);
  if (!x.contains({user, server, subband})) return 0.0;
  double bound = intercell_interference_bound(scen, x, server, subband);
  return p.watts[user] * scen.gains(user, server) / (bound + scen.radio.noise_power);
}

// Shannon rate over the user's (single) sub-band.
inline double uplink_rate(const NetworkScenario& scen, const Assignment& x,
                          const PowerAllocation& p, int user, int server,
                          SinrModel model = SinrModel::Exact) {
  const OffloadTriple* t = x.triple_for_user(user);
  if (t == nullptr || t->server != server) return 0.0;
  double g = sinr(scen, x, p, user, server, t->subband, model);
  return scen.radio.subband_width * std::log2(1.0 + g);
}

// ---------------------------------------------------------------------------
// Offloaded delay / energy / utility

struct DelayEnergy {
  double delay;   // s
  double energy;  // J
};

// Total offloading delay (upload + remote execution) and uplink energy of an
// offloaded user. A zero rate means the chosen BS is unreachable, which
// upstream search code must never propose.
inline DelayEnergy offload_delay_energy(const NetworkScenario& scen, const Assignment& x,
                                        const PowerAllocation& p, const ComputeAllocation& f,
                                        int user, SinrModel model = SinrModel::Exact) {
  const OffloadTriple* t = x.triple_for_user(user);
  if (t == nullptr) throw std::invalid_argument("offload_delay_energy: user is not offloaded");
  double rate = uplink_rate(scen, x, p, user, t->server, model);
  if (!(rate > 0.0))
    throw std::domain_error("offload_delay_energy: zero uplink rate (unreachable BS)");
  const UserDevice& u = scen.users[user];
  double upload = u.task.input_bits / rate;
  double delay = upload + u.task.workload_cycles / f.rate[user];
  double energy = p.watts[user] * upload / u.amp_efficiency;
  return {delay, energy};
}

// Weighted relative improvement over local execution; zero for users that
// keep their task local.
inline double user_utility(const NetworkScenario& scen, const Assignment& x,
                           const PowerAllocation& p, const ComputeAllocation& f, int user,
                           SinrModel model = SinrModel::Exact) {
  if (!x.offloaded(user)) return 0.0;
  const UserDevice& u = scen.users[user];
  auto [delay, energy] = offload_delay_energy(scen, x, p, f, user, model);
  double tl = local_completion_time(u);
  double el = local_energy(u);
  return u.pref_time * (tl - delay) / tl + u.pref_energy * (el - energy) / el;
}

namespace detail {

inline void check_consistent(const NetworkScenario& scen, const Assignment& x,
                             const PowerAllocation& p, const ComputeAllocation& f) {
  if (p.watts.size() != scen.users.size() || f.rate.size() != scen.users.size())
    throw std::invalid_argument("allocation vectors must cover every user");
  for (int u = 0; u < scen.num_users(); ++u) {
    bool off = x.offloaded(u);
    if (off && (!(p.watts[u] > 0.0) || !(f.rate[u] > 0.0)))
      throw std::invalid_argument("offloaded user " + std::to_string(u) +
                                  " lacks a positive power or compute rate");
    if (!off && (p.watts[u] != 0.0 || f.rate[u] != 0.0))
      throw std::invalid_argument("local user " + std::to_string(u) +
                                  " has a nonzero power or compute rate");
    if (p.watts[u] > scen.users[u].max_power * (1.0 + 1e-12))
      throw std::invalid_argument("user " + std::to_string(u) + " exceeds its power budget");
  }
  std::vector<double> load(scen.servers.size(), 0.0);
  for (const auto& t : x.triples()) load[t.server] += f.rate[t.user];
  for (int s = 0; s < scen.num_servers(); ++s)
    if (load[s] > scen.servers[s].cpu_rate * (1.0 + 1e-9))
      throw std::invalid_argument("server " + std::to_string(s) + " compute capacity exceeded");
}

}  // namespace detail

// System utility: provider-weighted sum of user utilities, with the per-user
// breakdown. Delay/energy entries fall back to the local figures for users
// that do not offload (that is what those users actually spend).
inline UtilityReport system_utility(const NetworkScenario& scen, const Assignment& x,
                                    const PowerAllocation& p, const ComputeAllocation& f,
                                    SinrModel model = SinrModel::Exact) {
  detail::check_consistent(scen, x, p, f);
  UtilityReport report;
  int n = scen.num_users();
  report.per_user_utility.resize(n, 0.0);
  report.per_user_delay.resize(n, 0.0);
  report.per_user_energy.resize(n, 0.0);
  for (int u = 0; u < n; ++u) {
    if (x.offloaded(u)) {
      auto [delay, energy] = offload_delay_energy(scen, x, p, f, u, model);
      report.per_user_delay[u] = delay;
      report.per_user_energy[u] = energy;
      report.per_user_utility[u] = user_utility(scen, x, p, f, u, model);
    } else {
      report.per_user_delay[u] = local_completion_time(scen.users[u]);
      report.per_user_energy[u] = local_energy(scen.users[u]);
    }
    report.system_utility += scen.users[u].provider_weight * report.per_user_utility[u];
  }
  return report;
}

// ---------------------------------------------------------------------------
// Overhead form of the objective

// Per-user constants of the overhead decomposition. phi weights upload time,
// psi weights upload energy (both per unit of spectral efficiency), eta
// weights remote execution time per unit compute rate.
struct OverheadCoefficients {
  double phi;
  double psi;
  double eta;
};

inline OverheadCoefficients overhead_coefficients(const UserDevice& u, double subband_width) {
  double tl = local_completion_time(u);
  double el = local_energy(u);
  // The amplifier efficiency (fixed to 1 in every shipped config) folds into
  // psi so the identity below is exact whatever its value.
  return {
      u.provider_weight * u.pref_time * u.task.input_bits / (tl * subband_width),
      u.provider_weight * u.pref_energy * u.task.input_bits / (el * subband_width * u.amp_efficiency),
      u.provider_weight * u.pref_time * u.local_cpu_rate,
  };
}

// Total offloading overhead of all offloaded users. The system utility
// satisfies J = sum of lambda_u (beta_t + beta_e) over offloaded users minus
// this quantity, for the same SINR model.
inline double overhead(const NetworkScenario& scen, const Assignment& x,
                       const PowerAllocation& p, const ComputeAllocation& f,
                       SinrModel model = SinrModel::Exact) {
  detail::check_consistent(scen, x, p, f);
  double total = 0.0;
  for (const auto& t : x.triples()) {
    const UserDevice& u = scen.users[t.user];
    auto [phi, psi, eta] = overhead_coefficients(u, scen.radio.subband_width);
    double g = sinr(scen, x, p, t.user, t.server, t.subband, model);
    total += (phi + psi * p.watts[t.user]) / std::log2(1.0 + g) + eta / f.rate[t.user];
  }
  return total;
}

}  // namespace jtora
