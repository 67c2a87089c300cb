#pragma once

#include <sstream>
#include <string>

namespace mmot {

enum class LogLevel { off = 0, info = 1, debug = 2 };

/// Current level, initialized once from the MMOT_LOG environment variable
/// ("info", "debug", anything else = off).
LogLevel log_level();

void log_line(LogLevel level, const std::string& msg);

namespace detail {
template <class... Args>
void log_fmt(LogLevel level, Args&&... args) {
  if (log_level() < level) return;
  std::ostringstream os;
  (os << ... << args);
  log_line(level, os.str());
}
}  // namespace detail

template <class... Args>
void log_info(Args&&... args) {
  detail::log_fmt(LogLevel::info, std::forward<Args>(args)...);
}

template <class... Args>
void log_debug(Args&&... args) {
  detail::log_fmt(LogLevel::debug, std::forward<Args>(args)...);
}

}  // namespace mmot
