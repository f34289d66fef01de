#pragma once

#include <string>

namespace trelax {

// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

// Write `content` to `path` via a temp file in the same directory plus an
// atomic rename, so readers never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace trelax
