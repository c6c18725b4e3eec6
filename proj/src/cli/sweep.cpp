#include <chrono>
#include <cstdio>
#include <fstream>

#include <spdlog/spdlog.h>

#include "evflex/cli/commands.hpp"
#include "evflex/model/instance_io.hpp"
#include "evflex/model/validate.hpp"
#include "evflex/solver/result.hpp"

namespace evflex::cli {

namespace {

double positive_number(const nlohmann::json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "." + key + " missing");
  if (!it->is_number()) throw InputError(path + "." + key + " must be a number");
  return it->get<double>();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

SweepSpec sweep_spec_from_json(const nlohmann::json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw InputError("sweep spec must be an object");
  SweepSpec spec;
  nlohmann::json solver = nlohmann::json::object();
  for (const auto& [key, v] : doc.items()) {
    if (key == "instance") {
      if (!v.is_string()) throw InputError("sweep.instance must be a path string");
      spec.instance = base_dir / v.get<std::string>();
    } else if (key == "out") {
      if (!v.is_string()) throw InputError("sweep.out must be a path string");
      spec.out = base_dir / v.get<std::string>();
    } else if (key == "threads") {
      if (!v.is_number_integer()) throw InputError("sweep.threads must be an integer");
      spec.threads = v.get<int>();
    } else if (key == "rows") {
      if (!v.is_array()) throw InputError("sweep.rows must be an array");
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string path = "sweep.rows[" + std::to_string(i) + "]";
        if (!v[i].is_object()) throw InputError(path + " must be an object");
        spec.rows.push_back({positive_number(v[i], "power_cap_kw", path), positive_number(v[i], "energy_cap_kwh", path)});
      }
    } else if (key == "solver") {
      solver = v;
    } else {
      throw InputError("sweep." + key + ": unknown key");
    }
  }
  if (spec.instance.empty()) throw InputError("sweep.instance missing");
  spec.solver = solver_config_from_json(solver);
  check_sweep_spec(spec);
  return spec;
}

SweepSpec load_sweep_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sweep spec " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return sweep_spec_from_json(doc, path.parent_path());
}

void check_sweep_spec(const SweepSpec& spec) {
  if (spec.rows.empty()) throw InputError("sweep.rows is empty");
  for (std::size_t i = 0; i < spec.rows.size(); ++i) {
    const auto& r = spec.rows[i];
    if (!(r.power_cap_kw > 0.0) || !(r.energy_cap_kwh > 0.0))
      throw InputError("sweep.rows[" + std::to_string(i) + "]: caps must be positive");
  }
  if (spec.threads < 1) throw InputError("sweep.threads must be at least 1");
}

std::vector<SweepResult> run_sweep(const Instance& base, const SweepSpec& spec) {
  check_sweep_spec(spec);
  const int n = static_cast<int>(spec.rows.size());
  std::vector<SweepResult> results(n);

#pragma omp parallel for schedule(dynamic) num_threads(spec.threads)
  for (int i = 0; i < n; ++i) {
    auto& row = results[i];
    row.caps = spec.rows[i];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Instance inst = base;
      inst.power_cap_kw = row.caps.power_cap_kw;
      inst.energy_cap_kwh = row.caps.energy_cap_kwh;
      const auto outcome = solve_and_settle(inst, spec.solver);
      row.status = to_string(outcome.result.status);
      if (outcome.settlement) row.aggregate = outcome.settlement->aggregate;
    } catch (const std::exception& e) {
      row.status = "error";
      spdlog::error("row {} ({} kW, {} kWh): {}", i, row.caps.power_cap_kw, row.caps.energy_cap_kwh, e.what());
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    spdlog::info("row {}: {} kW, {} kWh -> {} in {:.1f} s", i, row.caps.power_cap_kw, row.caps.energy_cap_kwh,
                 row.status, row.wall_seconds);
  }
  return results;
}

void write_sensitivity_csv(const std::vector<SweepResult>& rows, std::ostream& out) {
  out << "power_cap,energy_cap,served_cost_eur,U_eur,P_eur,rho_eur,phi_min_kwh,Phi_mwh,avg_cent_per_kwh,status\n";
  for (const auto& r : rows) {
    out << fixed(r.caps.power_cap_kw, 6) << ',' << fixed(r.caps.energy_cap_kwh, 6) << ',';
    if (r.aggregate) {
      const auto& a = *r.aggregate;
      out << a.served_cost.to_string() << ',' << a.total_compensation.to_string() << ',' << a.total_net.to_string()
          << ',' << a.min_net.to_string() << ',' << fixed(a.min_not_served_kwh, 9) << ','
          << fixed(a.total_not_served_kwh / 1000.0, 9) << ',' << fixed(a.average_cent_per_kwh, 9);
    } else {
      out << ",,,,,,";
    }
    out << ',' << r.status << '\n';
  }
}

int cmd_sweep(const SweepOptions& o) {
  try {
    auto spec = load_sweep_spec(o.spec);
    if (o.out) spec.out = *o.out;
    if (o.gap) spec.solver.gap = *o.gap;
    if (o.threads) spec.threads = *o.threads;
    if (!spec.out) throw InputError("no output directory: pass --out or set sweep.out");
    check_sweep_spec(spec);
    try {
      check_config(spec.solver);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }

    Instance base;
    try {
      base = load_instance(spec.instance);
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
    if (const auto report = validate(base); !report.ok()) {
      spdlog::error("{}: invalid instance\n{}", spec.instance.string(), report.summary());
      return kExitInput;
    }

    const auto rows = run_sweep(base, spec);
    fs::create_directories(*spec.out);
    const auto path = *spec.out / "sensitivity.csv";
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    write_sensitivity_csv(rows, out);
    spdlog::info("wrote {} rows to {}", rows.size(), path.string());
    return kExitOk;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
}

}  // namespace evflex::cli
