#pragma once

// Shared scaffolding for the test suites: hand-built scenarios with pinned
// gains, random feasible assignments, and the independent numeric oracles
// (projected gradient for the compute split, grid search for the power
// objective) used to validate the closed-form solvers.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "jtora/jtora.hpp"

namespace testutil {

struct ScenarioSpec {
  int num_users = 1;
  int num_servers = 1;
  int num_subbands = 1;
  std::vector<double> gains;  // row-major user x server
  jtora::UserParams user;
  double input_bits = 3.36e6;
  double workload_cycles = 1e9;
  double bandwidth = 2e6;  // per-subband width = bandwidth / num_subbands
  double noise = 1e-13;
  double server_cpu = 2e10;
};

inline jtora::NetworkScenario make_scenario(const ScenarioSpec& s) {
  std::vector<jtora::UserDevice> users;
  for (int u = 0; u < s.num_users; ++u)
    users.emplace_back(u, jtora::Vec2{0.0, 0.0},
                       jtora::TaskProfile(s.input_bits, s.workload_cycles), s.user);
  std::vector<jtora::EdgeServer> servers;
  for (int i = 0; i < s.num_servers; ++i)
    servers.emplace_back(i, jtora::Vec2{static_cast<double>(i), 0.0}, s.server_cpu);
  return jtora::NetworkScenario(
      std::move(users), std::move(servers),
      jtora::ChannelGains(s.num_users, s.num_servers, s.gains),
      jtora::RadioConfig(s.bandwidth, s.num_subbands, s.noise));
}

// Random feasible assignment over a scenario: every user flips a coin to
// offload and picks a uniformly random free (server, sub-band) slot.
inline jtora::Assignment random_assignment(const jtora::NetworkScenario& scen,
                                           jtora::SplitMix64& rng, double offload_prob = 0.7) {
  std::vector<jtora::OffloadTriple> triples;
  std::vector<char> used(
      static_cast<std::size_t>(scen.num_servers()) * scen.radio.num_subbands, 0);
  for (int u = 0; u < scen.num_users(); ++u) {
    if (rng.next_double() >= offload_prob) continue;
    std::vector<int> free_slots;
    for (int s = 0; s < scen.num_servers(); ++s)
      for (int j = 0; j < scen.radio.num_subbands; ++j)
        if (!used[static_cast<std::size_t>(s) * scen.radio.num_subbands + j])
          free_slots.push_back(s * scen.radio.num_subbands + j);
    if (free_slots.empty()) break;
    int slot = free_slots[rng.next_below(static_cast<int>(free_slots.size()))];
    used[static_cast<std::size_t>(slot)] = 1;
    triples.push_back({u, slot / scen.radio.num_subbands, slot % scen.radio.num_subbands});
  }
  return jtora::Assignment(std::move(triples));
}

// Allocations solved for an assignment, bundled for the evaluation tests.
struct Solved {
  jtora::PowerAllocation power;
  jtora::ComputeAllocation compute;
};

inline Solved solve_allocations(const jtora::NetworkScenario& scen, const jtora::Assignment& x) {
  return {jtora::solve_upa(scen, x).power, jtora::solve_cra(scen, x)};
}

// ---------------------------------------------------------------------------
// Projected-gradient oracle for the compute split (independent of the
// closed form). Works on normalized shares g = f / f_s over the simplex
// {g >= floor, sum g = budget}.

inline std::vector<double> project_simplex(std::vector<double> v, double budget, double floor) {
  // Duchi et al. sorting projection on the shifted variables w = g - floor.
  double shifted_budget = budget - floor * static_cast<double>(v.size());
  for (double& x : v) x -= floor;
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  int k = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    double candidate = (cumulative - shifted_budget) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) {
      tau = candidate;
      k = static_cast<int>(i + 1);
    }
  }
  (void)k;
  for (double& x : v) x = std::max(x - tau, 0.0) + floor;
  return v;
}

inline double cra_objective(const std::vector<double>& etas, const std::vector<double>& rates) {
  double total = 0.0;
  for (std::size_t i = 0; i < etas.size(); ++i) total += etas[i] / rates[i];
  return total;
}

// Minimize sum(eta_i / f_i) s.t. sum f <= f_s by projected gradient with
// Armijo backtracking; returns the best objective found.
inline double projected_gradient_cra(double server_rate, const std::vector<double>& etas,
                                     int max_iters = 20000) {
  const std::size_t n = etas.size();
  const double floor = 1e-12;
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = etas[i] / server_rate;  // objective scale in shares

  std::vector<double> g(n, 1.0 / static_cast<double>(n));
  auto value = [&](const std::vector<double>& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += a[i] / x[i];
    return total;
  };
  double current = value(g);
  double step = 1.0;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = -a[i] / (g[i] * g[i]);
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> trial(n);
      for (std::size_t i = 0; i < n; ++i) trial[i] = g[i] - step * grad[i];
      trial = project_simplex(std::move(trial), 1.0, floor);
      double trial_value = value(trial);
      if (trial_value < current) {
        g = std::move(trial);
        current = trial_value;
        step *= 2.0;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // no descent at any step size: converged
  }
  return current;
}

// Spearman rank correlation; ties are not expected in these sweeps.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<int> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t pos = 0; pos < idx.size(); ++pos) r[idx[pos]] = static_cast<double>(pos);
    return r;
  };
  std::vector<double> rx = ranks(xs), ry = ranks(ys);
  double mean = (static_cast<double>(rx.size()) - 1.0) / 2.0;
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mean) * (ry[i] - mean);
    dx += (rx[i] - mean) * (rx[i] - mean);
    dy += (ry[i] - mean) * (ry[i] - mean);
  }
  return num / std::sqrt(dx * dy);
}

}  // namespace testutil
