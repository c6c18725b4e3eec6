#include <CLI11.hpp>

#include "evflex/cli/commands.hpp"

using namespace evflex::cli;

namespace {

// CLI11 fills plain values; optionals are set only for flags actually given.
template <class T>
void take(const CLI::Option* opt, const T& value, std::optional<T>& target) {
  if (opt->count() > 0) target = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EV charging flexibility: generate sessions, schedule with compensation, sweep CPO limits"};
  app.require_subcommand(1);
  app.footer("Exit codes: 0 ok, 1 input/validation, 2 fit refused, 3 solver limit without a schedule.\n"
             "EVFLEX_LOG sets log verbosity (trace, debug, info, warn, error, off).");

  // generate
  GenerateOptions gen;
  std::string gen_policy, gen_report;
  int gen_count = 0, gen_kappa = 0;
  double gen_pcap = 0, gen_ecap = 0;
  auto* g = app.add_subcommand("generate", "fit the copula on historical sessions and draw an instance");
  g->add_option("--records", gen.records, "CSV arrival_iso8601,departure_iso8601,energy_kwh")->required();
  auto* g_policy = g->add_option("--policy", gen_policy, "policy JSON");
  g->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  g->add_option("--out", gen.out, "instance JSON to write")->required();
  auto* g_report = g->add_option("--report", gen_report, "generation report (default <out>.report.json)");
  auto* g_count = g->add_option("--count", gen_count, "sessions to emit")->check(CLI::PositiveNumber);
  auto* g_kappa = g->add_option("--kappa", gen_kappa, "utility segments")->check(CLI::PositiveNumber);
  auto* g_pcap = g->add_option("--power-cap", gen_pcap, "CPO power cap [kW]");
  auto* g_ecap = g->add_option("--energy-cap", gen_ecap, "CPO energy cap [kWh]");

  // solve
  SolveOptions sol;
  std::string sol_config;
  double sol_gap = 0, sol_time = 0, sol_pcap = 0, sol_ecap = 0;
  std::int64_t sol_nodes = 0;
  bool sol_no_greedy = false;
  auto* s = app.add_subcommand("solve", "schedule an instance and settle the payments");
  s->add_option("--instance", sol.instance, "instance JSON")->required();
  s->add_option("--out", sol.out, "result directory")->required();
  auto* s_config = s->add_option("--config", sol_config, "solver settings JSON");
  auto* s_gap = s->add_option("--gap", sol_gap, "absolute optimality gap [EUR] (default 0.01)");
  auto* s_time = s->add_option("--time-limit", sol_time, "seconds");
  auto* s_nodes = s->add_option("--node-limit", sol_nodes, "branch-and-bound nodes");
  auto* s_greedy = s->add_flag("--no-greedy", sol_no_greedy, "do not seed the search with the greedy schedule");
  auto* s_pcap = s->add_option("--power-cap", sol_pcap, "override the instance power cap [kW]");
  auto* s_ecap = s->add_option("--energy-cap", sol_ecap, "override the instance energy cap [kWh]");

  // sweep
  SweepOptions sw;
  std::string sw_out;
  double sw_gap = 0;
  int sw_threads = 0;
  auto* w = app.add_subcommand("sweep", "solve the instance once per (power cap, energy cap) row");
  w->add_option("--spec", sw.spec, "sweep spec JSON")->required();
  auto* w_out = w->add_option("--out", sw_out, "output directory (overrides spec)");
  auto* w_gap = w->add_option("--gap", sw_gap, "absolute optimality gap [EUR]");
  auto* w_threads = w->add_option("--threads", sw_threads, "rows solved at once")->check(CLI::PositiveNumber);

  // report
  ReportOptions rep;
  auto* r = app.add_subcommand("report", "histogram and CDF data from a solve directory");
  r->add_option("--in", rep.in, "solve output directory")->required();
  r->add_option("--bins", rep.bins, "histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
  r->add_option("--out", rep.out, "directory for the distribution CSVs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  init_logging();

  if (*g) {
    if (g_policy->count()) gen.policy = gen_policy;
    if (g_report->count()) gen.report = gen_report;
    take(g_count, gen_count, gen.count);
    take(g_kappa, gen_kappa, gen.kappa);
    take(g_pcap, gen_pcap, gen.power_cap_kw);
    take(g_ecap, gen_ecap, gen.energy_cap_kwh);
    return cmd_generate(gen);
  }
  if (*s) {
    if (s_config->count()) sol.config = sol_config;
    take(s_gap, sol_gap, sol.gap);
    take(s_time, sol_time, sol.time_limit_seconds);
    take(s_nodes, sol_nodes, sol.node_limit);
    if (s_greedy->count()) sol.greedy_start = !sol_no_greedy;
    take(s_pcap, sol_pcap, sol.power_cap_kw);
    take(s_ecap, sol_ecap, sol.energy_cap_kwh);
    return cmd_solve(sol);
  }
  if (*w) {
    if (w_out->count()) sw.out = sw_out;
    take(w_gap, sw_gap, sw.gap);
    take(w_threads, sw_threads, sw.threads);
    return cmd_sweep(sw);
  }
  return cmd_report(rep);
}
