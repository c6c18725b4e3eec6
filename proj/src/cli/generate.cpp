#include <fstream>

#include <spdlog/spdlog.h>

#include "evflex/cli/commands.hpp"
#include "evflex/datagen/copula.hpp"
#include "evflex/datagen/generate.hpp"
#include "evflex/model/instance_io.hpp"
#include "evflex/model/validate.hpp"

namespace evflex::cli {

namespace {

datagen::GenPolicy load_policy(const GenerateOptions& o) {
  datagen::GenPolicy policy;
  if (o.policy) {
    std::ifstream in(*o.policy);
    if (!in) throw InputError("cannot open policy " + o.policy->string());
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(o.policy->string() + ": " + e.what());
    }
    try {
      policy = datagen::policy_from_json(doc);
    } catch (const std::invalid_argument& e) {
      throw InputError(o.policy->string() + ": " + e.what());
    }
  }
  if (o.count) policy.count = *o.count;
  if (o.power_cap_kw) policy.power_cap_kw = *o.power_cap_kw;
  if (o.energy_cap_kwh) policy.energy_cap_kwh = *o.energy_cap_kwh;
  if (o.kappa) policy.kappa = *o.kappa;
  try {
    datagen::check_policy(policy);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  return policy;
}

std::vector<datagen::SessionRecord> load_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open records " + path.string());
  try {
    return datagen::read_records_csv(in);
  } catch (const std::runtime_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json(const nlohmann::json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

}  // namespace

int cmd_generate(const GenerateOptions& o) {
  try {
    const auto policy = load_policy(o);
    const auto records = load_records(o.records);
    spdlog::info("fitting copula on {} records", records.size());
    const auto model = datagen::fit_copula(records);
    spdlog::info("nu = {}, R = [{:.3f} {:.3f} {:.3f}]{}", model.nu, model.correlation(0, 1), model.correlation(1, 2),
                 model.correlation(0, 2), model.projected ? " (projected)" : "");

    auto generated = datagen::generate_sessions(model, policy, o.seed);
    if (generated.skipped > 0) spdlog::info("{} draws fell outside the grid", generated.skipped);
    auto report = datagen::generation_report(model, policy, o.seed, generated);
    report["records"] = records.size();

    const auto instance = datagen::make_instance(policy, generated.sessions);
    const auto check = validate(instance);
    if (!check.ok()) throw ValidationError(check);

    if (o.out.has_parent_path()) fs::create_directories(o.out.parent_path());
    save_instance(instance, o.out);
    write_json(report, o.report.value_or(default_report_path(o.out)));
    spdlog::info("wrote {} sessions to {}", instance.sessions.size(), o.out.string());
    return kExitOk;
  } catch (const datagen::FitError& e) {
    spdlog::error("fit refused: {}", e.what());
    return kExitFitRefused;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
}

}  // namespace evflex::cli
