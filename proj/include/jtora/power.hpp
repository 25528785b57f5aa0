#pragma once

// Uplink power allocation. With the offloading decision fixed, the radio
// part of the overhead separates into one scalar problem per offloaded
// user once inter-cell interference is replaced by its budget-power upper
// bound: minimize Gamma(p) = (phi + psi p) / log2(1 + theta p) over
// (0, P_max]. Gamma is strictly quasi-convex, its derivative changes sign
// exactly where Omega(p) = psi log2(1+theta p) - theta(phi+psi p) /
// ((1+theta p) ln 2) crosses zero, and Omega is increasing with
// Omega(0) < 0, so the minimizer is either the power budget (when
// Omega(P_max) <= 0) or the unique root of Omega, found by bisection.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jtora/model.hpp"

namespace jtora {

inline constexpr double kDefaultPowerTol = 1e-6;  // W

struct UpaCoefficients {
  double phi;        // weight of upload time
  double psi;        // weight of upload energy
  double theta;      // effective channel, 1/W
  double max_power;  // W

  UpaCoefficients(double phi_, double psi_, double theta_, double max_power_)
      : phi(phi_), psi(psi_), theta(theta_), max_power(max_power_) {
    if (!(phi > 0.0) || !(psi > 0.0) || !(theta > 0.0) || !(max_power > 0.0))
      throw std::invalid_argument("UpaCoefficients: all coefficients must be > 0");
  }
};

// Budget-power interference bound for the slot used by (user, server,
// subband): every interfering user is assumed to transmit at its maximum.
// This over-estimates the exact interference for any feasible power vector.
inline double interference_upper_bound(const NetworkScenario& scen, const Assignment& x,
                                       int server, int subband) {
  return intercell_interference_bound(scen, x, server, subband);
}

// theta = h / (I_bound + noise) for the user's single sub-band; theta * p
// is the approximated SINR.
inline double effective_channel(const NetworkScenario& scen, const Assignment& x, int user,
                                int server, int subband) {
  double bound = interference_upper_bound(scen, x, server, subband);
  return scen.gains(user, server) / (bound + scen.radio.noise_power);
}

inline UpaCoefficients upa_coefficients(const NetworkScenario& scen, const Assignment& x,
                                        const OffloadTriple& t) {
  auto [phi, psi, eta] = overhead_coefficients(scen.users[t.user], scen.radio.subband_width);
  (void)eta;  // compute side, handled by the CRA solver
  return UpaCoefficients(phi, psi, effective_channel(scen, x, t.user, t.server, t.subband),
                         scen.users[t.user].max_power);
}

inline double gamma_objective(const UpaCoefficients& c, double p) {
  if (!(p > 0.0)) throw std::domain_error("gamma_objective: power must be > 0");
  return (c.phi + c.psi * p) / std::log2(1.0 + c.theta * p);
}

// Stationarity function: same sign as Gamma'(p), increasing, negative at 0.
inline double omega(const UpaCoefficients& c, double p) {
  double a = 1.0 + c.theta * p;
  return c.psi * std::log2(a) - c.theta * (c.phi + c.psi * p) / (a * 0.69314718055994530942);
}

struct BisectionResult {
  double power;
  int iterations;     // bisection steps; 0 on the boundary branch
  bool at_boundary;   // Omega(max_power) <= 0, full power optimal
};

// Bisection over [0, max_power] to interval width <= tol. In the interior
// case this takes exactly ceil(log2(max_power / tol)) halvings.
inline BisectionResult bisect_power(const UpaCoefficients& c, double tol = kDefaultPowerTol) {
  if (!(tol > 0.0)) throw std::invalid_argument("bisect_power: tol must be > 0");
  if (omega(c, c.max_power) <= 0.0) return {c.max_power, 0, true};
  double lo = 0.0;
  double hi = c.max_power;
  int iterations = 0;
  while (hi - lo > tol) {
    double mid = (lo + hi) / 2.0;
    if (omega(c, mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
    ++iterations;
  }
  return {(lo + hi) / 2.0, iterations, false};
}

struct GammaDerivatives {
  double first;
  double second;
};

// Closed-form first and second derivatives of Gamma, used for verification
// of the quasi-convexity argument rather than by the solver itself.
inline GammaDerivatives gamma_derivatives(const UpaCoefficients& c, double p) {
  if (!(p > 0.0)) throw std::domain_error("gamma_derivatives: power must be > 0");
  constexpr double kLn2 = 0.69314718055994530942;
  double a = 1.0 + c.theta * p;            // A
  double cc = std::log2(a);                // C
  double d = c.phi + c.psi * p;            // D
  double g = c.theta * d - 2.0 * c.psi * a;  // G
  double first = (c.psi * cc - c.theta * d / (a * kLn2)) / (cc * cc);
  double second = c.theta * (g * cc + 2.0 * c.theta * d / kLn2) / (a * a * cc * cc * cc * kLn2);
  return {first, second};
}

struct UpaSolution {
  PowerAllocation power;
  double objective;  // Gamma(X, P*) under the approximated SINR
};

// Solve every offloaded user's scalar problem independently. Coefficients
// use the budget-power interference bound, so no user's solution depends on
// another's solved power.
inline UpaSolution solve_upa(const NetworkScenario& scen, const Assignment& x,
                             double tol = kDefaultPowerTol) {
  UpaSolution out{PowerAllocation(scen.users.size()), 0.0};
  for (const auto& t : x.triples()) {
    UpaCoefficients c = upa_coefficients(scen, x, t);
    double p = bisect_power(c, tol).power;
    out.power.watts[t.user] = p;
    out.objective += gamma_objective(c, p);
  }
  return out;
}

}  // namespace jtora
