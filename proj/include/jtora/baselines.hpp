#pragma once

// The four comparison schedulers run against the local-search scheduler:
// exhaustive enumeration, greedy all-offload (GOJRA), independent random
// offload (IOJRA), and per-cell distributed search (DORA). All of them emit
// assignments satisfying both independence constraints and share the same
// resource-allocation back end, so utilities are directly comparable.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jtora/rng.hpp"
#include "jtora/scenario.hpp"
#include "jtora/search.hpp"

namespace jtora {

enum class SchemeId { IOJRA, GOJRA, DORA, HJTORA, Exhaustive };

inline constexpr SchemeId kAllSchemes[] = {SchemeId::IOJRA, SchemeId::GOJRA, SchemeId::DORA,
                                           SchemeId::HJTORA, SchemeId::Exhaustive};

inline std::string_view scheme_name(SchemeId id) {
  switch (id) {
    case SchemeId::IOJRA: return "IOJRA";
    case SchemeId::GOJRA: return "GOJRA";
    case SchemeId::DORA: return "DORA";
    case SchemeId::HJTORA: return "hJTORA";
    case SchemeId::Exhaustive: return "Exhaustive";
  }
  return "?";
}

inline SchemeId parse_scheme(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (SchemeId id : kAllSchemes)
    if (lower == [&] {
          std::string n(scheme_name(id));
          std::transform(n.begin(), n.end(), n.begin(),
                         [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
          return n;
        }())
      return id;
  throw std::invalid_argument("unknown scheme: " + std::string(name));
}

// Strongest-gain BS; the notion of "own cell" used by the baselines.
inline int home_bs(const NetworkScenario& scen, int user) {
  int best = 0;
  for (int s = 1; s < scen.num_servers(); ++s)
    if (scen.gains(user, s) > scen.gains(user, best)) best = s;
  return best;
}

struct ExhaustiveGuardError : std::runtime_error {
  int ground_size;
  ExhaustiveGuardError(int n, int guard)
      : std::runtime_error("exhaustive search refused: ground set size " + std::to_string(n) +
                           " exceeds guard " + std::to_string(guard)),
        ground_size(n) {}
};

inline constexpr int kDefaultExhaustiveGuard = 24;

// Enumerate every feasible assignment by backtracking over users (each user
// is either local or takes one free (server, sub-band) slot) and keep the
// maximum of j_star. Ties keep the first assignment found in enumeration
// order, which is deterministic. The empty assignment (value 0) is always a
// candidate, so the result is never negative.
inline ScheduleResult exhaustive_schedule(const NetworkScenario& scen,
                                          double tol = kDefaultPowerTol,
                                          int guard = kDefaultExhaustiveGuard) {
  const int num_users = scen.num_users();
  const int num_servers = scen.num_servers();
  const int num_subbands = scen.radio.num_subbands;
  const int n = num_users * num_servers * num_subbands;
  if (n > guard) throw ExhaustiveGuardError(n, guard);

  JStarEvaluator eval(scen, tol, /*enable_cache=*/false);
  std::vector<OffloadTriple> stack;
  std::vector<char> slot_used(static_cast<std::size_t>(num_servers) * num_subbands, 0);
  double best_value = 0.0;
  Assignment best;  // empty fallback

  auto recurse = [&](auto&& self, int user) -> void {
    if (user == num_users) {
      if (stack.empty()) return;  // empty set already scored
      Assignment x(stack);
      double v = eval.value(x);
      if (v > best_value) {
        best_value = v;
        best = std::move(x);
      }
      return;
    }
    self(self, user + 1);  // run locally
    for (int s = 0; s < num_servers; ++s) {
      for (int j = 0; j < num_subbands; ++j) {
        std::size_t slot = static_cast<std::size_t>(s) * num_subbands + j;
        if (slot_used[slot]) continue;
        slot_used[slot] = 1;
        stack.push_back({user, s, j});
        self(self, user + 1);
        stack.pop_back();
        slot_used[slot] = 0;
      }
    }
  };
  recurse(recurse, 0);

  ScheduleResult result;
  result.assignment = std::move(best);
  result.objective = best_value;
  detail::finish_schedule(scen, tol, result);
  return result;
}

// Greedy all-offload: every user goes to its home BS; within a cell, the
// highest-gain (user, sub-band) pair among unadmitted users and free
// sub-bands is granted repeatedly (ties broken by user index, then
// sub-band) until users or sub-bands run out; leftover users stay local.
// Gains are flat across sub-bands here, but the scan keeps the general
// per-pair form.
inline ScheduleResult gojra_schedule(const NetworkScenario& scen, double tol = kDefaultPowerTol) {
  const int num_subbands = scen.radio.num_subbands;
  std::vector<std::vector<int>> cell_members(scen.servers.size());
  for (int u = 0; u < scen.num_users(); ++u) cell_members[home_bs(scen, u)].push_back(u);

  std::vector<OffloadTriple> triples;
  std::vector<char> admitted;
  std::vector<char> band_used;
  for (int s = 0; s < scen.num_servers(); ++s) {
    const auto& members = cell_members[s];
    admitted.assign(members.size(), 0);
    band_used.assign(static_cast<std::size_t>(num_subbands), 0);
    int grants = std::min<int>(static_cast<int>(members.size()), num_subbands);
    for (int g = 0; g < grants; ++g) {
      int best_m = -1, best_j = -1;
      double best_gain = -1.0;
      for (std::size_t m = 0; m < members.size(); ++m) {
        if (admitted[m]) continue;
        for (int j = 0; j < num_subbands; ++j) {
          if (band_used[j]) continue;
          double gain = scen.gains(members[m], s);
          if (gain > best_gain) {
            best_gain = gain;
            best_m = static_cast<int>(m);
            best_j = j;
          }
        }
      }
      admitted[best_m] = 1;
      band_used[best_j] = 1;
      triples.push_back({members[best_m], s, best_j});
    }
  }

  ScheduleResult result;
  result.assignment = Assignment(std::move(triples));
  result.objective = JStarEvaluator(scen, tol, false).value(result.assignment);
  detail::finish_schedule(scen, tol, result);
  return result;
}

namespace detail {

// Distance-based gain with the same 10 m floor the generator applies. Used
// by the independent-decision estimate, which deliberately ignores the
// shadowing realization: a device choosing on its own knows its geometry,
// not the fading state of every link. 10^(-(140.7 + 36.7 log10 d)/10)
// collapses to a single power law.
inline double nominal_gain(Vec2 a, Vec2 b) {
  double d = std::max(distance(a, b), 0.01);
  return 8.5113803820237935e-15 * std::pow(d, -3.67);
}

}  // namespace detail

// Independent offloading: each user draws a uniform sub-band at its home BS
// (collisions keep the lowest user index, the rest run locally), then
// decides on its own whether offloading pays off. The standalone estimate
// is optimistic on compute (full server CPU), pessimistic on radio
// (budget-power interference from every drawn slot holder), transmits at
// the user's own budget, and sees only nominal path-loss gains. Joint
// resource allocation over the true channel is applied afterwards.
inline ScheduleResult iojra_schedule(const NetworkScenario& scen, std::uint64_t seed,
                                     double tol = kDefaultPowerTol) {
  const int num_subbands = scen.radio.num_subbands;
  SplitMix64 rng(derive_seed(seed, 0x10A));

  std::vector<OffloadTriple> holders;
  for (int u = 0; u < scen.num_users(); ++u) {
    int s = home_bs(scen, u);
    int j = rng.next_below(num_subbands);
    bool taken = false;
    for (const auto& t : holders)
      if (t.server == s && t.subband == j) {
        taken = true;
        break;
      }
    if (!taken) holders.push_back({u, s, j});
  }

  std::vector<OffloadTriple> offloaders;
  for (const auto& t : holders) {
    const UserDevice& u = scen.users[t.user];
    auto [phi, psi, eta] = overhead_coefficients(u, scen.radio.subband_width);
    double interference = 0.0;
    for (const auto& other : holders)
      if (other.server != t.server && other.subband == t.subband)
        interference += scen.users[other.user].max_power *
                        detail::nominal_gain(scen.users[other.user].position,
                                             scen.servers[t.server].position);
    double theta = detail::nominal_gain(u.position, scen.servers[t.server].position) /
                   (interference + scen.radio.noise_power);
    UpaCoefficients c(phi, psi, theta, u.max_power);
    double standalone = u.provider_weight * (u.pref_time + u.pref_energy) -
                        gamma_objective(c, u.max_power) -
                        eta / scen.servers[t.server].cpu_rate;
    if (standalone > 0.0) offloaders.push_back(t);
  }

  ScheduleResult result;
  result.assignment = Assignment(std::move(offloaders));
  result.objective = JStarEvaluator(scen, tol, false).value(result.assignment);
  detail::finish_schedule(scen, tol, result);
  return result;
}

// Distributed per-cell scheduling: each BS runs the local-search scheduler
// over its own users only, with no knowledge of other cells (so the
// interference bound inside each sub-problem is zero). The per-cell
// assignments are then merged and re-scored globally so utilities remain
// comparable across schemes.
inline ScheduleResult dora_schedule(const NetworkScenario& scen, double eps = kDefaultSearchEps,
                                    double tol = kDefaultPowerTol) {
  std::vector<std::vector<int>> cell_members(scen.servers.size());
  for (int u = 0; u < scen.num_users(); ++u) cell_members[home_bs(scen, u)].push_back(u);

  std::vector<OffloadTriple> merged;
  for (int s = 0; s < scen.num_servers(); ++s) {
    const auto& members = cell_members[s];
    if (members.empty()) continue;

    std::vector<UserDevice> users;
    std::vector<double> gains;
    users.reserve(members.size());
    for (int u : members) {
      users.push_back(scen.users[u]);
      users.back().id = static_cast<int>(users.size()) - 1;
      gains.push_back(scen.gains(u, s));
    }
    NetworkScenario cell(std::move(users), {scen.servers[s]},
                         ChannelGains(members.size(), 1, std::move(gains)), scen.radio);
    cell.servers[0].id = 0;

    SearchResult local = heuristic_schedule(cell, eps, tol);
    for (const auto& t : local.assignment.triples())
      merged.push_back({members[t.user], s, t.subband});
  }

  ScheduleResult result;
  result.assignment = Assignment(std::move(merged));
  result.objective = JStarEvaluator(scen, tol, false).value(result.assignment);
  detail::finish_schedule(scen, tol, result);
  return result;
}

struct SchemeParams {
  double eps = kDefaultSearchEps;
  double power_tol = kDefaultPowerTol;
  int exhaustive_guard = kDefaultExhaustiveGuard;
  std::uint64_t seed = 0;  // consumed by IOJRA only
};

inline ScheduleResult run_scheme(SchemeId id, const NetworkScenario& scen,
                                 const SchemeParams& params = {}) {
  switch (id) {
    case SchemeId::IOJRA: return iojra_schedule(scen, params.seed, params.power_tol);
    case SchemeId::GOJRA: return gojra_schedule(scen, params.power_tol);
    case SchemeId::DORA: return dora_schedule(scen, params.eps, params.power_tol);
    case SchemeId::HJTORA: return heuristic_schedule(scen, params.eps, params.power_tol);
    case SchemeId::Exhaustive:
      return exhaustive_schedule(scen, params.power_tol, params.exhaustive_guard);
  }
  throw std::logic_error("run_scheme: unhandled scheme");
}

}  // namespace jtora
