#pragma once

// Compute resource allocation. Per server, minimizing sum(eta_u / f_u)
// subject to sum(f_u) <= f_s is convex with the closed-form KKT solution
// f_u = f_s * sqrt(eta_u) / sum(sqrt(eta)); the optimum value is
// (sum sqrt(eta))^2 / f_s.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jtora/model.hpp"

namespace jtora {

class CraInstance {
 public:
  CraInstance(double server_rate, std::vector<double> etas)
      : server_rate_(server_rate), etas_(std::move(etas)) {
    if (!(server_rate_ > 0.0)) throw std::invalid_argument("CraInstance: server_rate must be > 0");
    double max_eta = 0.0;
    for (double e : etas_) {
      if (e < 0.0) throw std::invalid_argument("CraInstance: eta must be >= 0");
      max_eta = std::max(max_eta, e);
    }
    // eta = 0 (a user with zero time preference) breaks the closed form;
    // clamp to a floor relative to the largest weight and flag it. An
    // all-zero instance degenerates to an even split.
    if (max_eta > 0.0) {
      double floor = 1e-12 * max_eta;
      for (double& e : etas_) {
        if (e < floor) {
          e = floor;
          clamped_ = true;
        }
      }
    }
  }

  double server_rate() const { return server_rate_; }
  const std::vector<double>& etas() const { return etas_; }
  bool clamped() const { return clamped_; }

 private:
  double server_rate_;
  std::vector<double> etas_;
  bool clamped_ = false;
};

// Optimal rates; they sum to the full server rate (the budget constraint is
// tight at the optimum). An empty instance yields an empty allocation.
inline std::vector<double> allocate(const CraInstance& inst) {
  const auto& etas = inst.etas();
  std::vector<double> rates(etas.size(), 0.0);
  if (etas.empty()) return rates;
  double sum_sqrt = 0.0;
  for (double e : etas) sum_sqrt += std::sqrt(e);
  if (sum_sqrt == 0.0) {  // all-zero weights: any feasible point is optimal
    for (double& r : rates) r = inst.server_rate() / static_cast<double>(etas.size());
    return rates;
  }
  for (std::size_t i = 0; i < etas.size(); ++i)
    rates[i] = inst.server_rate() * std::sqrt(etas[i]) / sum_sqrt;
  return rates;
}

// Optimal objective value sum(eta / f*) = (sum sqrt(eta))^2 / f_s.
inline double optimal_value(const CraInstance& inst) {
  double sum_sqrt = 0.0;
  for (double e : inst.etas()) sum_sqrt += std::sqrt(e);
  return sum_sqrt * sum_sqrt / inst.server_rate();
}

// Per-server assembly across the whole assignment.
inline ComputeAllocation solve_cra(const NetworkScenario& scen, const Assignment& x) {
  ComputeAllocation out(scen.users.size());
  for (int s = 0; s < scen.num_servers(); ++s) {
    std::vector<int> members;
    std::vector<double> etas;
    for (const auto& t : x.triples()) {
      if (t.server != s) continue;
      members.push_back(t.user);
      etas.push_back(overhead_coefficients(scen.users[t.user], scen.radio.subband_width).eta);
    }
    if (members.empty()) continue;
    std::vector<double> rates = allocate(CraInstance(scen.servers[s].cpu_rate, std::move(etas)));
    for (std::size_t i = 0; i < members.size(); ++i) out.rate[members[i]] = rates[i];
  }
  return out;
}

// Total compute overhead of the optimal allocation, summed over servers.
// Routed through CraInstance so the eta floor matches what allocate() sees.
inline double cra_total_value(const NetworkScenario& scen, const Assignment& x) {
  double total = 0.0;
  for (int s = 0; s < scen.num_servers(); ++s) {
    std::vector<double> etas;
    for (const auto& t : x.triples())
      if (t.server == s)
        etas.push_back(overhead_coefficients(scen.users[t.user], scen.radio.subband_width).eta);
    if (etas.empty()) continue;
    total += optimal_value(CraInstance(scen.servers[s].cpu_rate, std::move(etas)));
  }
  return total;
}

}  // namespace jtora
