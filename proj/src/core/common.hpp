#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace trelax {

inline constexpr double pi = 3.14159265358979323846;

// Bad arguments or malformed input data.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem / serialization failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested ratio has a vanishing denominator (e.g. empty spectrum tail).
struct UndefinedRatio : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solution became non-finite; `last_valid_time` is the time before the
// offending step.
struct BlowUpError : std::runtime_error {
  BlowUpError(const std::string& what, double t)
      : std::runtime_error(what), last_valid_time(t) {}
  double last_valid_time;
};

// Non-fatal advisories (disabled regularization, CFL margin) are routed
// through a process-wide handler so embedders can capture them.
// The default handler writes to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler handler);  // empty -> restore default
void emit_warning(const std::string& message);

}  // namespace trelax
