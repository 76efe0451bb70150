#include "cli/logging.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace dynamask::cli {

void init_logging() {
  static bool done = false;
  if (!done) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("dynamask"));
    spdlog::set_pattern("[%l] %v");
    done = true;
  }
  const char* env = std::getenv("DYNAMASK_LOG");
  if (env == nullptr || *env == '\0') {
    spdlog::set_level(spdlog::level::info);
    return;
  }
  const auto level = spdlog::level::from_str(env);
  // from_str maps unknown names to "off"; only honor it when asked for.
  if (level == spdlog::level::off && std::string(env) != "off") {
    spdlog::set_level(spdlog::level::info);
    spdlog::warn("unknown DYNAMASK_LOG level '{}', using info", env);
  } else {
    spdlog::set_level(level);
  }
}

}  // namespace dynamask::cli
