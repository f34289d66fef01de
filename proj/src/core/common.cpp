#include "core/common.hpp"

#include <cstdio>
#include <mutex>
#include <utility>

namespace trelax {

namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn_handler;  // empty = default

void default_warning(const std::string& message) {
  std::fprintf(stderr, "trelax: warning: %s\n", message.c_str());
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void emit_warning(const std::string& message) {
  WarningHandler handler;
  {
    std::lock_guard<std::mutex> lock(g_warn_mutex);
    handler = g_warn_handler;
  }
  if (handler)
    handler(message);
  else
    default_warning(message);
}

}  // namespace trelax
