#include "mmot/log.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

namespace mmot {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("MMOT_LOG");
    if (env == nullptr) return LogLevel::off;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::off;
  }();
  return level;
}

void log_line(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << (level == LogLevel::debug ? "[mmot:debug] " : "[mmot] ") << msg
            << "\n";
}

}  // namespace mmot
