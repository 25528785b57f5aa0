// Command-line harness around the experiment runner. `run` executes an
// arbitrary configured experiment; fig2..fig6 and table1 are presets for
// the bundled evaluation campaign. Exit codes: 0 success, 1 configuration
// error, 2 runtime error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jtora/config.hpp"
#include "jtora/experiment.hpp"

namespace {

using namespace jtora;

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> drops;
  std::optional<std::string> schemes;
  std::string interference = "exact";
  int threads = 0;
  int exhaustive_guard = kDefaultExhaustiveGuard;
  double eps = kDefaultSearchEps;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& opt, const std::string& default_out) {
  cmd->add_option("--out", opt.out_path, "output CSV path")->default_val(default_out);
  cmd->add_option("--seed", opt.seed, "master seed");
  cmd->add_option("--drops", opt.drops, "Monte-Carlo drops per point");
  cmd->add_option("--schemes", opt.schemes, "comma-separated scheme list");
  cmd->add_option("--interference", opt.interference, "utility scoring: approx, exact or both")
      ->check(CLI::IsMember({"approx", "exact", "both"}));
  cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
  cmd->add_option("--exhaustive-guard", opt.exhaustive_guard,
                  "largest ground-set size Exhaustive will accept");
  cmd->add_option("--eps", opt.eps, "local-search improvement threshold parameter");
  cmd->add_flag("--verbose", opt.verbose, "log per-drop scenario hashes to stderr");
}

std::vector<SchemeId> parse_schemes(const std::string& list) {
  std::vector<SchemeId> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t comma = list.find(',', start);
    std::string token = list.substr(start, comma - start);
    if (!token.empty()) out.push_back(parse_scheme(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("schemes", "empty scheme list");
  return out;
}

InterferenceMode parse_interference(const std::string& s) {
  if (s == "approx") return InterferenceMode::Approx;
  if (s == "exact") return InterferenceMode::Exact;
  return InterferenceMode::Both;
}

void apply_common(ExperimentSpec& spec, const CommonOptions& opt) {
  if (opt.seed) spec.master_seed = *opt.seed;
  if (opt.drops) spec.drops = *opt.drops;
  if (opt.schemes) spec.schemes = parse_schemes(*opt.schemes);
  spec.interference = parse_interference(opt.interference);
  spec.threads = opt.threads;
  spec.exhaustive_guard = opt.exhaustive_guard;
  spec.eps = opt.eps;
  spec.verbose = opt.verbose;
}

// The small four-cell network used by the suboptimality and runtime studies.
ScenarioConfig small_network() {
  ScenarioConfig c;
  c.num_cells = 4;
  c.users_total = 6;
  c.num_subbands = 2;
  return c;
}

ScenarioConfig seven_cells(int users_per_cell) {
  ScenarioConfig c;
  c.num_cells = 7;
  c.users_per_cell = users_per_cell;
  return c;
}

void run_and_emit(const ExperimentSpec& spec, const std::string& out_path) {
  std::vector<ResultRow> rows = run(spec);
  emit_csv(rows, out_path);
  std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint task offloading and resource allocation simulator"};
  app.require_subcommand(1);

  CommonOptions run_opt, fig2_opt, fig3_opt, fig4_opt, fig5_opt, fig6_opt, table1_opt;

  auto* cmd_run = app.add_subcommand("run", "run an experiment from a JSON scenario config");
  cmd_run->add_option("--config", run_opt.config_path, "scenario config JSON")->required();
  std::string sweep_name;
  std::vector<double> sweep_values;
  cmd_run->add_option("--sweep", sweep_name,
                      "swept parameter: users_per_cell, c_u, d_u, beta_t or P_u_dbm");
  cmd_run->add_option("--values", sweep_values, "sweep values (space separated)");
  add_common(cmd_run, run_opt, "results.csv");

  auto* cmd_fig2 = app.add_subcommand(
      "fig2", "suboptimality study: 6 users, 4 cells, 2 sub-bands, all five schemes");
  add_common(cmd_fig2, fig2_opt, "fig2.csv");

  auto* cmd_fig3 =
      app.add_subcommand("fig3", "utility vs users per cell (1..10), 7 cells");
  bool fig3_nonuniform = false;
  cmd_fig3->add_flag("--nonuniform", fig3_nonuniform,
                     "alternate 500/2000 megacycle workloads across cells");
  add_common(cmd_fig3, fig3_opt, "fig3.csv");

  auto* cmd_fig4 = app.add_subcommand("fig4", "utility vs task profile, 28 users over 7 cells");
  std::string fig4_param = "workload";
  cmd_fig4->add_option("--param", fig4_param, "swept task parameter")
      ->check(CLI::IsMember({"workload", "input"}));
  add_common(cmd_fig4, fig4_opt, "fig4.csv");

  auto* cmd_fig5 =
      app.add_subcommand("fig5", "delay/energy vs time preference (0.1..0.9), 7 cells");
  int fig5_users = 14;
  cmd_fig5->add_option("--users", fig5_users, "total number of users (14 or 21 in the study)");
  add_common(cmd_fig5, fig5_opt, "fig5.csv");

  auto* cmd_fig6 = app.add_subcommand(
      "fig6", "exact vs approximated interference scoring across power budgets");
  add_common(cmd_fig6, fig6_opt, "fig6.csv");

  auto* cmd_table1 = app.add_subcommand(
      "table1", "runtime comparison of all five schemes on the small network");
  add_common(cmd_table1, table1_opt, "table1.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the usage message
    return 1;     // bad invocations are configuration errors
  }

  try {
    if (cmd_run->parsed()) {
      ExperimentSpec spec;
      spec.scenario = load_config(run_opt.config_path);
      spec.master_seed = spec.scenario.seed;
      spec.schemes = {SchemeId::HJTORA};
      if (!sweep_name.empty()) {
        spec.sweep = parse_sweep_param(sweep_name);
        spec.sweep_values = sweep_values;
      } else if (!sweep_values.empty()) {
        throw ConfigError("sweep", "--values given without --sweep");
      }
      apply_common(spec, run_opt);
      run_and_emit(spec, run_opt.out_path);
    } else if (cmd_fig2->parsed()) {
      ExperimentSpec spec;
      spec.scenario = small_network();
      spec.schemes = {SchemeId::Exhaustive, SchemeId::HJTORA, SchemeId::DORA, SchemeId::GOJRA,
                      SchemeId::IOJRA};
      spec.sweep = SweepParam::WorkloadCycles;
      spec.sweep_values = {1e9, 2e9};
      spec.exhaustive_guard = 48;  // the 6*4*2 ground set
      apply_common(spec, fig2_opt);
      spec.exhaustive_guard = std::max(spec.exhaustive_guard, 48);
      run_and_emit(spec, fig2_opt.out_path);
    } else if (cmd_fig3->parsed()) {
      ExperimentSpec spec;
      spec.scenario = seven_cells(1);
      if (fig3_nonuniform)
        spec.scenario.workload_cycles_per_cell = {5e8, 2e9, 5e8, 2e9, 5e8, 2e9, 5e8};
      spec.schemes = {SchemeId::HJTORA, SchemeId::DORA, SchemeId::GOJRA, SchemeId::IOJRA};
      spec.sweep = SweepParam::UsersPerCell;
      spec.sweep_values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
      spec.drops = 20;  // heavy preset; raise --drops for smoother curves
      apply_common(spec, fig3_opt);
      run_and_emit(spec, fig3_opt.out_path);
    } else if (cmd_fig4->parsed()) {
      ExperimentSpec spec;
      spec.scenario = seven_cells(4);  // 28 users
      spec.schemes = {SchemeId::HJTORA, SchemeId::DORA, SchemeId::GOJRA, SchemeId::IOJRA};
      if (fig4_param == "workload") {
        spec.sweep = SweepParam::WorkloadCycles;
        spec.sweep_values = {5e8, 1e9, 1.5e9, 2e9, 2.5e9, 3e9};
      } else {
        spec.sweep = SweepParam::InputBits;
        // 100 KB .. 1 MB in bits (decimal units)
        spec.sweep_values = {8e5, 1.6e6, 2.4e6, 3.36e6, 4.8e6, 6.4e6, 8e6};
      }
      spec.drops = 20;
      apply_common(spec, fig4_opt);
      run_and_emit(spec, fig4_opt.out_path);
    } else if (cmd_fig5->parsed()) {
      ExperimentSpec spec;
      spec.scenario = seven_cells(2);
      spec.scenario.users_total = fig5_users;
      spec.scenario.num_subbands = (fig5_users + 6) / 7;
      spec.schemes = {SchemeId::HJTORA};
      spec.sweep = SweepParam::BetaTime;
      spec.sweep_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
      apply_common(spec, fig5_opt);
      run_and_emit(spec, fig5_opt.out_path);
    } else if (cmd_fig6->parsed()) {
      ExperimentSpec spec;
      spec.scenario = seven_cells(2);
      spec.sweep = SweepParam::MaxPowerDbm;
      spec.sweep_values = {0, 5, 10, 15, 20, 25, 30, 35};
      spec.drops = 40;
      apply_common(spec, fig6_opt);
      std::vector<Fig6Row> rows = fig6_gap(spec);
      emit_fig6_csv(rows, fig6_opt.out_path);
      std::printf("wrote %zu rows to %s\n", rows.size(), fig6_opt.out_path.c_str());
    } else if (cmd_table1->parsed()) {
      ExperimentSpec spec;
      spec.scenario = small_network();
      spec.schemes = {SchemeId::Exhaustive, SchemeId::HJTORA, SchemeId::DORA, SchemeId::GOJRA,
                      SchemeId::IOJRA};
      spec.drops = 20;
      spec.threads = 1;  // comparable runtimes need sequential execution
      spec.exhaustive_guard = 48;
      apply_common(spec, table1_opt);
      spec.threads = 1;
      spec.exhaustive_guard = std::max(spec.exhaustive_guard, 48);
      run_and_emit(spec, table1_opt.out_path);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
