#pragma once

#include <string>

namespace perturbdyn {

/// Sets the library log level from `level` ("trace" .. "off"), or from the
/// PERTURBDYN_LOG environment variable when `level` is empty. Default: warn.
void configure_logging(const std::string& level = {});

void log_info(const std::string& msg);
void log_debug(const std::string& msg);
void log_warn(const std::string& msg);

}  // namespace perturbdyn
