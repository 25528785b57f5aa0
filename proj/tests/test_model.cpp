#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "jtora/jtora.hpp"

using namespace jtora;
using testutil::make_scenario;
using testutil::ScenarioSpec;

namespace {

UserDevice default_user(double workload = 1e9, double input_bits = 3.36e6) {
  return UserDevice(0, {0.0, 0.0}, TaskProfile(input_bits, workload));
}

}  // namespace

TEST_CASE("domain type invariants are enforced at construction") {
  CHECK_THROWS_AS(TaskProfile(0.0, 1e9), std::invalid_argument);
  CHECK_THROWS_AS(TaskProfile(1e6, -1.0), std::invalid_argument);
  UserParams bad;
  bad.pref_time = 0.3;
  bad.pref_energy = 0.8;
  CHECK_THROWS_AS(UserDevice(0, {0, 0}, TaskProfile(1e6, 1e9), bad), std::invalid_argument);
  CHECK_THROWS_AS(EdgeServer(0, {0, 0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(RadioConfig(2e7, 0, 1e-13), std::invalid_argument);
  CHECK(RadioConfig(2e7, 4, 1e-13).subband_width == 5e6);
  CHECK_THROWS_AS(ChannelGains(1, 1, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ChannelGains(2, 1, {1e-10}), std::invalid_argument);
}

TEST_CASE("assignment matroid constraints") {
  Assignment empty;
  CHECK(is_feasible(empty));
  CHECK_THROWS_AS(Assignment({{1, 1, 1}, {1, 2, 1}}), std::invalid_argument);  // user twice
  CHECK_THROWS_AS(Assignment({{1, 1, 1}, {2, 1, 1}}), std::invalid_argument);  // slot twice
  Assignment x({{0, 1, 0}, {2, 0, 1}});
  CHECK(x.contains({0, 1, 0}));
  CHECK_FALSE(x.contains({0, 1, 1}));
  CHECK(x.offloaded(2));
  CHECK_FALSE(x.offloaded(1));
  CHECK(x.user_in_slot(1, 0) == 0);
  CHECK(x.user_in_slot(1, 1) == -1);
}

TEST_CASE("local completion time") {
  CHECK(local_completion_time(default_user(1e9)) == 1.0);
  CHECK(local_completion_time(default_user(2e9)) == 2.0);
  // vanishing workload limit
  CHECK(local_completion_time(default_user(1.0)) == 1e-9);
}

TEST_CASE("local energy") {
  CHECK(local_energy(default_user(1e9)) == Catch::Approx(5.0).epsilon(1e-12));
  CHECK(local_energy(default_user(1.0)) == Catch::Approx(5e-9).epsilon(1e-12));
  // quadratic in the local CPU rate
  UserParams fast;
  fast.local_cpu_rate = 2e9;
  UserDevice doubled(0, {0, 0}, TaskProfile(3.36e6, 1e9), fast);
  CHECK(local_energy(doubled) == Catch::Approx(4.0 * local_energy(default_user())).epsilon(1e-12));
}

TEST_CASE("sinr of a lone offloaded user is signal over noise") {
  ScenarioSpec spec;
  spec.gains = {1e-10};
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}});
  PowerAllocation p(1);
  p.watts[0] = 0.1;
  CHECK(exact_sinr(scen, x, p, 0, 0, 0) == Catch::Approx(100.0).epsilon(1e-12));
  // a triple outside the assignment carries no SINR
  CHECK(exact_sinr(scen, x, p, 0, 0, 1) == 0.0);
}

TEST_CASE("users on distinct sub-bands never interfere") {
  ScenarioSpec spec;
  spec.num_users = 2;
  spec.num_servers = 2;
  spec.num_subbands = 2;
  spec.gains = {1e-10, 1e-12, 2e-12, 5e-11};
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}, {1, 1, 1}});
  PowerAllocation p(2);
  p.watts = {0.1, 0.05};
  CHECK(exact_sinr(scen, x, p, 0, 0, 0) ==
        Catch::Approx(0.1 * 1e-10 / 1e-13).epsilon(1e-12));
  CHECK(exact_sinr(scen, x, p, 1, 1, 1) ==
        Catch::Approx(0.05 * 5e-11 / 1e-13).epsilon(1e-12));
}

TEST_CASE("same sub-band across cells adds the cross gains") {
  ScenarioSpec spec;
  spec.num_users = 2;
  spec.num_servers = 2;
  spec.gains = {1e-10, 1e-12, 2e-12, 5e-11};
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}, {1, 1, 0}});
  PowerAllocation p(2);
  p.watts = {0.1, 0.05};

  // brute-force interference sums, independent of the library loop
  double i0 = p.watts[1] * scen.gains(1, 0);
  double i1 = p.watts[0] * scen.gains(0, 1);
  CHECK(exact_sinr(scen, x, p, 0, 0, 0) ==
        Catch::Approx(p.watts[0] * scen.gains(0, 0) / (i0 + 1e-13)).epsilon(1e-12));
  CHECK(exact_sinr(scen, x, p, 1, 1, 0) ==
        Catch::Approx(p.watts[1] * scen.gains(1, 1) / (i1 + 1e-13)).epsilon(1e-12));
}

TEST_CASE("uplink rate follows the Shannon formula over one sub-band") {
  ScenarioSpec spec;
  spec.bandwidth = 1e6;  // W = 1 MHz
  spec.gains = {1e-12};
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}});
  PowerAllocation p(1);

  p.watts[0] = 0.1;  // SINR = 1
  CHECK(uplink_rate(scen, x, p, 0, 0) == Catch::Approx(1e6).epsilon(1e-12));

  p.watts[0] = 10.0;  // SINR = 100
  CHECK(uplink_rate(scen, x, p, 0, 0) == Catch::Approx(6658211.482751795).epsilon(1e-12));

  p.watts[0] = 1e-9;  // SINR -> 0
  CHECK(uplink_rate(scen, x, p, 0, 0) < 1.0);
  CHECK(uplink_rate(scen, x, p, 0, 1) == 0.0);  // not the serving BS
}

TEST_CASE("offload delay and energy") {
  ScenarioSpec spec;
  spec.bandwidth = 1e6;
  spec.gains = {1e-12};
  spec.input_bits = 1e6;
  spec.user.max_power = 0.1;
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}});
  PowerAllocation p(1);
  p.watts[0] = 0.1;  // SINR = 1 -> R = 1e6 bit/s
  ComputeAllocation f(1);
  f.rate[0] = 1e10;

  auto [delay, energy] = offload_delay_energy(scen, x, p, f, 0);
  CHECK(delay == Catch::Approx(1.1).epsilon(1e-12));
  CHECK(energy == Catch::Approx(0.1).epsilon(1e-12));

  // remote execution vanishes as the compute share grows
  f.rate[0] = 1e30;
  CHECK(offload_delay_energy(scen, x, p, f, 0).delay == Catch::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(offload_delay_energy(scen, Assignment{}, p, f, 0), std::invalid_argument);

  // a zero rate marks an unreachable BS, never a valid utility
  PowerAllocation dead(1);
  f.rate[0] = 1e10;
  CHECK_THROWS_AS(offload_delay_energy(scen, x, dead, f, 0), std::domain_error);
}

TEST_CASE("user utility matches the weighted relative-improvement form") {
  ScenarioSpec spec;
  spec.bandwidth = 4e6;
  spec.gains = {1e-14};
  spec.user.max_power = 10.0;
  spec.input_bits = 1e6;
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}});
  PowerAllocation p(1);
  p.watts[0] = 10.0;  // SINR = 1 -> R = 4e6 bit/s, upload = 0.25 s
  ComputeAllocation f(1);
  f.rate[0] = 4e9;  // execution = 0.25 s

  // delay and energy both land at exactly half their local values
  CHECK(user_utility(scen, x, p, f, 0) == Catch::Approx(0.5).epsilon(1e-12));

  // not offloaded -> zero utility
  CHECK(user_utility(scen, Assignment{}, p, f, 0) == 0.0);
}

TEST_CASE("utility is zero when offloading matches local cost exactly") {
  ScenarioSpec spec;
  spec.bandwidth = 4e6;
  spec.gains = {1e-14};
  spec.user.max_power = 10.0;
  spec.input_bits = 2e6;  // upload = 0.5 s at R = 4e6
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}});
  PowerAllocation p(1);
  p.watts[0] = 10.0;  // E = 5 J = local energy
  ComputeAllocation f(1);
  f.rate[0] = 2e9;  // total delay = 1 s = local time
  CHECK(user_utility(scen, x, p, f, 0) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("system utility aggregates provider-weighted user utilities") {
  ScenarioSpec spec;
  spec.num_users = 2;
  spec.num_servers = 2;
  spec.num_subbands = 2;
  spec.gains = {1e-11, 1e-13, 1e-13, 1e-11};
  auto scen = make_scenario(spec);

  SECTION("empty assignment scores zero and reports local costs") {
    auto report = system_utility(scen, Assignment{}, PowerAllocation(2), ComputeAllocation(2));
    CHECK(report.system_utility == 0.0);
    CHECK(report.per_user_delay[0] == Catch::Approx(1.0));
    CHECK(report.per_user_energy[1] == Catch::Approx(5.0));
  }

  SECTION("single offloaded user with unit provider weight") {
    Assignment x({{0, 0, 0}});
    auto [p, f] = testutil::solve_allocations(scen, x);
    auto report = system_utility(scen, x, p, f);
    CHECK(report.system_utility ==
          Catch::Approx(user_utility(scen, x, p, f, 0)).epsilon(1e-12));
    CHECK(report.per_user_utility[1] == 0.0);
  }

  SECTION("inconsistent allocation support sets are rejected") {
    Assignment x({{0, 0, 0}});
    PowerAllocation p(2);  // offloaded user with zero power
    ComputeAllocation f(2);
    f.rate[0] = 1e9;
    CHECK_THROWS_AS(system_utility(scen, x, p, f), std::invalid_argument);

    PowerAllocation p2(2);
    p2.watts[0] = 0.1;
    ComputeAllocation f2(2);
    f2.rate[0] = 1e9;
    f2.rate[1] = 1e9;  // local user with compute share
    CHECK_THROWS_AS(system_utility(scen, x, p2, f2), std::invalid_argument);

    PowerAllocation p3(2);
    p3.watts[0] = 0.5;  // above the 0.1 W budget
    CHECK_THROWS_AS(system_utility(scen, x, p3, f2), std::invalid_argument);
  }
}

TEST_CASE("overhead coefficients") {
  UserParams params;
  params.pref_time = 1.0;
  params.pref_energy = 0.0;
  UserDevice u(0, {0, 0}, TaskProfile(3.36e6, 1e9), params);
  auto [phi, psi, eta] = overhead_coefficients(u, 1e7);
  CHECK(eta == Catch::Approx(1e9).epsilon(1e-12));
  CHECK(phi == Catch::Approx(1.0 * 1.0 * 3.36e6 / (1.0 * 1e7)).epsilon(1e-12));
  CHECK(psi == 0.0);
}

TEST_CASE("overhead of an empty assignment is zero") {
  ScenarioSpec spec;
  spec.gains = {1e-11};
  auto scen = make_scenario(spec);
  CHECK(overhead(scen, Assignment{}, PowerAllocation(1), ComputeAllocation(1)) == 0.0);
}

TEST_CASE("utility equals constant term minus overhead on random instances") {
  ScenarioConfig config;
  config.num_cells = 3;
  config.users_per_cell = 2;
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 30; ++trial) {
    auto scen = generate(config, derive_seed(99, trial));
    auto x = testutil::random_assignment(scen, rng);
    auto [p, f] = testutil::solve_allocations(scen, x);
    double constant = 0.0;
    for (const auto& t : x.triples()) {
      const auto& u = scen.users[t.user];
      constant += u.provider_weight * (u.pref_time + u.pref_energy);
    }
    for (SinrModel model : {SinrModel::Exact, SinrModel::MaxPowerInterference}) {
      double via_utilities = system_utility(scen, x, p, f, model).system_utility;
      double via_overhead = constant - overhead(scen, x, p, f, model);
      CHECK(std::abs(via_utilities - via_overhead) <=
            1e-9 * std::max({std::abs(via_utilities), std::abs(via_overhead), 1.0}));
    }
  }
}

TEST_CASE("more compute strictly reduces delay and raises utility") {
  ScenarioSpec spec;
  spec.gains = {1e-11};
  auto scen = make_scenario(spec);
  Assignment x({{0, 0, 0}});
  PowerAllocation p(1);
  p.watts[0] = 0.1;
  ComputeAllocation slow(1), fast(1);
  slow.rate[0] = 5e9;
  fast.rate[0] = 1e10;
  CHECK(offload_delay_energy(scen, x, p, fast, 0).delay <
        offload_delay_energy(scen, x, p, slow, 0).delay);
  CHECK(user_utility(scen, x, p, fast, 0) > user_utility(scen, x, p, slow, 0));
}
