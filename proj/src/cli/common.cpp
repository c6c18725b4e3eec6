#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "evflex/cli/commands.hpp"

namespace evflex::cli {

void init_logging() {
  auto logger = spdlog::get("evflex");
  if (!logger) {
    logger = spdlog::stderr_color_mt("evflex");
    spdlog::set_default_logger(logger);
  }
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  auto level = spdlog::level::info;
  if (const char* env = std::getenv("EVFLEX_LOG")) {
    const auto parsed = spdlog::level::from_str(env);
    // from_str maps anything unknown to off; only accept real names
    if (parsed != spdlog::level::off || std::string(env) == "off")
      level = parsed;
    else
      spdlog::warn("EVFLEX_LOG={} not recognised, using info", env);
  }
  spdlog::set_level(level);
}

fs::path default_report_path(const fs::path& instance_out) {
  auto p = instance_out;
  p.replace_extension();
  p += ".report.json";
  return p;
}

}  // namespace evflex::cli
