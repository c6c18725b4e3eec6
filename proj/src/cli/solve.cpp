#include <fstream>

#include <spdlog/spdlog.h>

#include "evflex/cli/commands.hpp"
#include "evflex/lp/simplex.hpp"
#include "evflex/model/instance_io.hpp"
#include "evflex/model/validate.hpp"
#include "evflex/solver/milp.hpp"
#include "evflex/solver/result.hpp"

namespace evflex::cli {

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

nlohmann::json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace

BnbConfig solver_config_from_json(const nlohmann::json& doc, BnbConfig c) {
  if (!doc.is_object()) throw InputError("solver config must be an object");
  for (const auto& [key, v] : doc.items()) {
    const auto bad = [&](const char* what) { throw InputError("solver." + key + ": " + what); };
    if (key == "gap") {
      if (!v.is_number()) bad("must be a number");
      c.gap = v.get<double>();
    } else if (key == "time_limit_seconds") {
      if (!v.is_number()) bad("must be a number");
      c.time_limit_seconds = v.get<double>();
    } else if (key == "node_limit") {
      if (!v.is_number_integer()) bad("must be an integer");
      c.node_limit = v.get<std::int64_t>();
    } else if (key == "branching") {
      const auto s = v.is_string() ? v.get<std::string>() : "";
      if (s == "most-fractional")
        c.branching = BranchRule::MostFractional;
      else if (s == "first-fractional")
        c.branching = BranchRule::FirstFractional;
      else
        bad("expected most-fractional or first-fractional");
    } else if (key == "greedy_start") {
      if (!v.is_boolean()) bad("must be true or false");
      c.greedy_start = v.get<bool>();
    } else if (key == "parallel_kernels") {
      if (!v.is_boolean()) bad("must be true or false");
      c.lp.parallel_kernels = v.get<bool>();
    } else {
      bad("unknown key");
    }
  }
  try {
    check_config(c);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return c;
}

SolveOutcome solve_and_settle(const Instance& instance, const BnbConfig& config) {
  const auto model = build_model(instance);
  SolveOutcome out;
  out.result = solve(model, config);
  if (out.result.has_solution)
    out.settlement = settle(instance, out.result.schedule, out.result.phi, out.result.z);
  return out;
}

int cmd_solve(const SolveOptions& o) {
  try {
    Instance instance;
    try {
      instance = load_instance(o.instance);
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
    if (o.power_cap_kw) instance.power_cap_kw = *o.power_cap_kw;
    if (o.energy_cap_kwh) instance.energy_cap_kwh = *o.energy_cap_kwh;
    if (const auto report = validate(instance); !report.ok()) {
      spdlog::error("{}: invalid instance\n{}", o.instance.string(), report.summary());
      return kExitInput;
    }

    BnbConfig config;
    if (o.config) config = solver_config_from_json(load_json(*o.config), config);
    if (o.gap) config.gap = *o.gap;
    if (o.time_limit_seconds) config.time_limit_seconds = *o.time_limit_seconds;
    if (o.node_limit) config.node_limit = *o.node_limit;
    if (o.greedy_start) config.greedy_start = *o.greedy_start;
    try {
      check_config(config);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }

    spdlog::info("solving {} sessions x {} slots, p_max {} kW, E_max {} kWh", instance.sessions.size(),
                 instance.grid.num_slots, instance.power_cap_kw, instance.energy_cap_kwh);
    const auto outcome = solve_and_settle(instance, config);
    const auto& r = outcome.result;
    spdlog::info("{}: objective {:.6f}, bound {:.6f}, {} nodes, {:.2f} s", to_string(r.status), r.objective,
                 r.best_bound, r.nodes, r.wall_seconds);
    if (!r.has_solution) {
      spdlog::error("no solution: {}", to_string(r.status));
      return r.status == SolveStatus::Limit ? kExitSolverLimit : kExitInput;
    }
    if (r.status == SolveStatus::Limit) spdlog::warn("limit reached, reporting the incumbent");

    const auto check = verify_solution(instance, r);
    if (!check.ok()) spdlog::warn("residual check: worst {} = {:.3g}", check.worst.row, check.worst.value);

    fs::create_directories(o.out);
    {
      auto f = open_out(o.out / "schedule.csv");
      write_schedule_csv(instance, r, f);
    }
    {
      auto f = open_out(o.out / "sessions.csv");
      write_sessions_csv(instance, r, f);
    }
    {
      auto f = open_out(o.out / "settlement.csv");
      write_settlement_csv(*outcome.settlement, f);
    }
    {
      auto f = open_out(o.out / "aggregate.csv");
      write_aggregate_csv(outcome.settlement->aggregate, f);
    }
    auto meta = run_metadata(r);
    meta["instance"] = o.instance.string();
    meta["power_cap_kw"] = instance.power_cap_kw;
    meta["energy_cap_kwh"] = instance.energy_cap_kwh;
    meta["gap_tolerance_eur"] = config.gap;
    meta["verification"] = {{"ok", check.ok()},
                            {"checks", check.checks},
                            {"worst_row", check.worst.row},
                            {"worst_residual", check.worst.value}};
    const auto duality = lp::duality_stats();
    meta["lp_duality"] = {{"checks", duality.checks}, {"worst_relative_gap", duality.worst_relative_gap}};
    open_out(o.out / "run.json") << meta.dump(1) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
}

}  // namespace evflex::cli
