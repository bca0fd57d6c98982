#include "reframe/core/log.hpp"

#include <iostream>
#include <mutex>

namespace reframe::log {
namespace {

std::mutex g_mutex;

Sink& sink()
{
  static Sink s = [](std::string_view level, std::string_view message) {
    std::clog << '[' << level << "] " << message << '\n';
  };
  return s;
}

void emit(std::string_view level, std::string_view message)
{
  std::lock_guard lock(g_mutex);
  if (sink()) sink()(level, message);
}

}  // namespace

Sink set_sink(Sink s)
{
  std::lock_guard lock(g_mutex);
  return std::exchange(sink(), std::move(s));
}

void warn(std::string_view message) { emit("warn", message); }
void info(std::string_view message) { emit("info", message); }

}  // namespace reframe::log
