#pragma once

// Offloading-decision search. The optimal-value function j_star(X) folds
// the two resource-allocation solutions into a set function over offloading
// triples; the scheduler maximizes it by local search under the two
// independence constraints, starting from the best singleton and applying
// the first remove or exchange that improves the value by a factor of more
// than (1 + eps / n^2), n being the ground-set size.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "jtora/compute.hpp"
#include "jtora/model.hpp"
#include "jtora/power.hpp"

namespace jtora {

inline constexpr double kDefaultSearchEps = 0.1;

inline bool is_feasible(const Assignment& x) { return Assignment::feasible(x.triples()); }

// X minus one of its elements. Subsets of feasible sets stay feasible.
inline Assignment remove_op(const Assignment& x, const OffloadTriple& elem) {
  if (!x.contains(elem)) throw std::invalid_argument("remove_op: element not in assignment");
  return x.without(elem);
}

// Insert an outside element, first dropping whatever conflicts with it:
// the user's current triple (if any) and the current occupant of the
// target (server, sub-band) slot (if any), so at most two departures.
inline Assignment exchange_op(const Assignment& x, const OffloadTriple& elem) {
  if (x.contains(elem)) throw std::invalid_argument("exchange_op: element already in assignment");
  Assignment next = x;
  if (const OffloadTriple* t = next.triple_for_user(elem.user)) next = next.without(*t);
  if (int occupant = next.user_in_slot(elem.server, elem.subband); occupant >= 0)
    next = next.without(*next.triple_for_user(occupant));
  return next.with(elem);
}

namespace detail {

struct TripleVectorHash {
  std::size_t operator()(const std::vector<std::uint32_t>& key) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint32_t v : key) {
      h ^= v;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

// Evaluates j_star(X) = sum over offloaded users of lambda_u(beta_t+beta_e)
// minus the approximate-SINR power objective minus the closed-form compute
// objective. Values are cached by the canonical (sorted) triple list; the
// per-user overhead coefficients are precomputed since they do not depend
// on the assignment.
class JStarEvaluator {
 public:
  explicit JStarEvaluator(const NetworkScenario& scen, double power_tol = kDefaultPowerTol,
                          bool enable_cache = true)
      : scen_(scen), tol_(power_tol), cache_enabled_(enable_cache) {
    coefs_.reserve(scen.users.size());
    for (const auto& u : scen.users)
      coefs_.push_back(overhead_coefficients(u, scen.radio.subband_width));
  }

  const NetworkScenario& scenario() const { return scen_; }
  double power_tol() const { return tol_; }

  double value(const Assignment& x) {
    ++queries_;
    if (!cache_enabled_) return evaluate(x);
    std::vector<std::uint32_t> key;
    key.reserve(x.size());
    for (const auto& t : x.triples())
      key.push_back(static_cast<std::uint32_t>(
          (t.user * scen_.num_servers() + t.server) * scen_.radio.num_subbands + t.subband));
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++cache_hits_;
      return it->second;
    }
    double v = evaluate(x);
    cache_.emplace(std::move(key), v);
    return v;
  }

  UpaSolution power_solution(const Assignment& x) const { return solve_upa(scen_, x, tol_); }
  ComputeAllocation compute_solution(const Assignment& x) const { return solve_cra(scen_, x); }

  std::size_t query_count() const { return queries_; }
  std::size_t cache_hits() const { return cache_hits_; }

 private:
  double evaluate(const Assignment& x) const {
    if (x.empty()) return 0.0;
    double total = 0.0;
    for (const auto& t : x.triples()) {
      const UserDevice& u = scen_.users[t.user];
      total += u.provider_weight * (u.pref_time + u.pref_energy);
      UpaCoefficients c(coefs_[t.user].phi, coefs_[t.user].psi,
                        effective_channel(scen_, x, t.user, t.server, t.subband), u.max_power);
      total -= gamma_objective(c, bisect_power(c, tol_).power);
    }
    return total - cra_total_value(scen_, x);
  }

  const NetworkScenario& scen_;
  double tol_;
  bool cache_enabled_;
  std::vector<OverheadCoefficients> coefs_;
  std::unordered_map<std::vector<std::uint32_t>, double, detail::TripleVectorHash> cache_;
  std::size_t queries_ = 0;
  std::size_t cache_hits_ = 0;
};

inline double j_star(const Assignment& x, const NetworkScenario& scen,
                     double tol = kDefaultPowerTol) {
  if (!is_feasible(x)) throw std::invalid_argument("j_star: infeasible assignment");
  JStarEvaluator eval(scen, tol, /*enable_cache=*/false);
  return eval.value(x);
}

enum class MoveKind { Remove, Exchange };

struct SearchMove {
  MoveKind kind;
  OffloadTriple element;
  double value_before;
  double value_after;
};

struct SearchTrace {
  std::optional<OffloadTriple> initial_element;  // best positive singleton, if any
  double initial_value = 0.0;
  double final_value = 0.0;
  int scan_passes = 0;                 // improvement scans, including the final empty one
  std::vector<SearchMove> accepted;
  std::size_t jstar_queries = 0;
  std::size_t jstar_cache_hits = 0;
};

struct ScheduleResult {
  Assignment assignment;
  PowerAllocation power;
  ComputeAllocation compute;
  double objective = 0.0;      // j_star(X), approximated SINR
  double exact_utility = 0.0;  // system utility re-evaluated with exact interference
  UtilityReport report;        // exact-SINR breakdown
};

struct SearchResult : ScheduleResult {
  SearchTrace trace;
};

namespace detail {

// Final allocations plus both objective readings for a decided assignment.
inline void finish_schedule(const NetworkScenario& scen, double tol, ScheduleResult& r) {
  UpaSolution upa = solve_upa(scen, r.assignment, tol);
  r.power = std::move(upa.power);
  r.compute = solve_cra(scen, r.assignment);
  r.report = system_utility(scen, r.assignment, r.power, r.compute, SinrModel::Exact);
  r.exact_utility = r.report.system_utility;
}

}  // namespace detail

// Local-search scheduler. Deterministic: ground elements are scanned in
// ascending (user, server, subband) order and the first improving move is
// taken; removes are exhausted before exchanges are considered.
inline SearchResult heuristic_schedule(const NetworkScenario& scen,
                                       double eps = kDefaultSearchEps,
                                       double tol = kDefaultPowerTol) {
  if (!(eps > 0.0)) throw std::invalid_argument("heuristic_schedule: eps must be > 0");
  const int num_users = scen.num_users();
  const int num_servers = scen.num_servers();
  const int num_subbands = scen.radio.num_subbands;
  const double n = static_cast<double>(num_users) * num_servers * num_subbands;
  const double threshold_factor = 1.0 + eps / (n * n);

  SearchResult result;
  JStarEvaluator eval(scen, tol);

  // Best positive singleton seeds the search; if none is positive every
  // task stays local (offloading at a loss is dominated by doing nothing).
  Assignment current;
  double current_value = 0.0;
  bool found = false;
  OffloadTriple best{0, 0, 0};
  for (int u = 0; u < num_users; ++u) {
    for (int s = 0; s < num_servers; ++s) {
      for (int j = 0; j < num_subbands; ++j) {
        double v = eval.value(Assignment({{u, s, j}}));
        if (v > current_value) {  // strict: ties keep the lowest tuple
          current_value = v;
          best = {u, s, j};
          found = true;
        }
      }
    }
  }
  if (found) {
    current = Assignment({best});
    result.trace.initial_element = best;
    result.trace.initial_value = current_value;

    for (;;) {
      ++result.trace.scan_passes;
      bool improved = false;

      for (const auto& t : current.triples()) {
        Assignment candidate = remove_op(current, t);
        double v = eval.value(candidate);
        if (v > threshold_factor * current_value) {
          result.trace.accepted.push_back({MoveKind::Remove, t, current_value, v});
          current = std::move(candidate);
          current_value = v;
          improved = true;
          break;
        }
      }
      if (improved) continue;

      for (int u = 0; u < num_users && !improved; ++u) {
        for (int s = 0; s < num_servers && !improved; ++s) {
          for (int j = 0; j < num_subbands && !improved; ++j) {
            OffloadTriple t{u, s, j};
            if (current.contains(t)) continue;
            Assignment candidate = exchange_op(current, t);
            double v = eval.value(candidate);
            if (v > threshold_factor * current_value) {
              result.trace.accepted.push_back({MoveKind::Exchange, t, current_value, v});
              current = std::move(candidate);
              current_value = v;
              improved = true;
            }
          }
        }
      }
      if (!improved) break;
    }
  }

  result.assignment = std::move(current);
  result.objective = current_value;
  result.trace.final_value = current_value;
  result.trace.jstar_queries = eval.query_count();
  result.trace.jstar_cache_hits = eval.cache_hits();
  detail::finish_schedule(scen, tol, result);
  return result;
}

}  // namespace jtora
