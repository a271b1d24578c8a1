#include "perturbdyn/logging.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "perturbdyn/error.hpp"

namespace perturbdyn {

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static auto instance = [] {
    auto l = spdlog::stderr_color_mt("perturbdyn");
    l->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return instance;
}

}  // namespace

void configure_logging(const std::string& level) {
  std::string name = level;
  if (name.empty()) {
    if (const char* env = std::getenv("PERTURBDYN_LOG")) name = env;
  }
  if (name.empty()) name = "warn";
  const auto lvl = spdlog::level::from_str(name);
  if (lvl == spdlog::level::off && name != "off") {
    throw ConfigError("unknown log level \"" + name + "\"");
  }
  logger()->set_level(lvl);
}

void log_info(const std::string& msg) { logger()->info(msg); }
void log_debug(const std::string& msg) { logger()->debug(msg); }
void log_warn(const std::string& msg) { logger()->warn(msg); }

}  // namespace perturbdyn
