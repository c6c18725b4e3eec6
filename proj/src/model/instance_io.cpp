#include "evflex/model/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace evflex {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw InstanceFormatError(path + " is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InstanceFormatError(path + "." + key + " missing");
  return *it;
}

double number(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) throw InstanceFormatError(path + "." + key + " must be a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number_integer()) throw InstanceFormatError(path + "." + key + " must be an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) throw InstanceFormatError(field + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw InstanceFormatError(field + "[" + std::to_string(i) + "] must be a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

SessionSpec session_from_json(const json& j, const std::string& path) {
  SessionSpec s;
  const auto& id = require(j, "id", path);
  if (!id.is_string()) throw InstanceFormatError(path + ".id must be a string");
  s.id = id.get<std::string>();
  s.arrival_slot = integer(j, "arrival_slot", path);
  s.departure_slot = integer(j, "departure_slot", path);
  s.required_energy_kwh = number(j, "required_energy_kwh", path);
  s.gamma = number(j, "gamma", path);
  s.max_power_kw = number(j, "max_power_kw", path);
  s.efficiency = number(j, "efficiency", path);

  const auto& price = require(j, "price_eur_per_kwh", path);
  if (price.is_number())
    s.price_eur_per_kwh = {price.get<double>()};
  else
    s.price_eur_per_kwh = numbers(price, path + ".price_eur_per_kwh");

  const std::string upath = path + ".utility";
  const auto& u = require(j, "utility", path);
  auto alpha = numbers(require(u, "breakpoints_kwh", upath), upath + ".breakpoints_kwh");
  auto upper = numbers(require(u, "upper_values_eur", upath), upath + ".upper_values_eur");
  auto lower = numbers(require(u, "lower_values_eur", upath), upath + ".lower_values_eur");
  try {
    s.utility = UtilityCurve::from_values(std::move(alpha), std::move(upper), std::move(lower));
  } catch (const CurveError& e) {
    throw InstanceFormatError(upath + ": " + e.what());
  }
  return s;
}

}  // namespace

json instance_to_json(const Instance& instance) {
  json doc;
  doc["grid"] = {{"delta_t_hours", instance.grid.delta_t_hours},
                 {"num_slots", instance.grid.num_slots},
                 {"start", format_timestamp(instance.grid.start)}};
  doc["power_cap_kw"] = instance.power_cap_kw;
  doc["energy_cap_kwh"] = instance.energy_cap_kwh;
  json sessions = json::array();
  for (const auto& s : instance.sessions) {
    json j;
    j["id"] = s.id;
    j["arrival_slot"] = s.arrival_slot;
    j["departure_slot"] = s.departure_slot;
    j["required_energy_kwh"] = s.required_energy_kwh;
    j["gamma"] = s.gamma;
    j["max_power_kw"] = s.max_power_kw;
    j["efficiency"] = s.efficiency;
    if (s.price_eur_per_kwh.size() == 1)
      j["price_eur_per_kwh"] = s.price_eur_per_kwh.front();
    else
      j["price_eur_per_kwh"] = s.price_eur_per_kwh;
    j["utility"] = {{"breakpoints_kwh", s.utility.breakpoints()},
                    {"upper_values_eur", s.utility.upper_values()},
                    {"lower_values_eur", s.utility.lower_values()}};
    sessions.push_back(std::move(j));
  }
  doc["sessions"] = std::move(sessions);
  return doc;
}

Instance instance_from_json(const json& doc) {
  Instance inst;
  const auto& grid = require(doc, "grid", "instance");
  inst.grid.delta_t_hours = number(grid, "delta_t_hours", "grid");
  inst.grid.num_slots = integer(grid, "num_slots", "grid");
  const auto& start = require(grid, "start", "grid");
  if (!start.is_string()) throw InstanceFormatError("grid.start must be a timestamp string");
  try {
    inst.grid.start = parse_timestamp(start.get<std::string>());
  } catch (const std::exception& e) {
    throw InstanceFormatError(std::string("grid.start: ") + e.what());
  }
  inst.power_cap_kw = number(doc, "power_cap_kw", "instance");
  inst.energy_cap_kwh = number(doc, "energy_cap_kwh", "instance");

  const auto& sessions = require(doc, "sessions", "instance");
  if (!sessions.is_array()) throw InstanceFormatError("sessions must be an array");
  inst.sessions.reserve(sessions.size());
  for (std::size_t n = 0; n < sessions.size(); ++n)
    inst.sessions.push_back(session_from_json(sessions[n], "sessions[" + std::to_string(n) + "]"));
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InstanceFormatError(path.string() + ": " + e.what());
  }
  return instance_from_json(doc);
}

void save_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << instance_to_json(instance).dump(1) << '\n';
}

}  // namespace evflex
