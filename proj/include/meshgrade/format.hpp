#ifndef MESHGRADE_FORMAT_HPP
#define MESHGRADE_FORMAT_HPP

#include <charconv>
#include <cstdio>
#include <string>

namespace meshgrade {

// Shortest representation that parses back to the same double; keeps
// serialized tables byte-stable across runs.
inline std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;  // 64 bytes always suffice
  return std::string(buffer, end);
}

inline std::string format_fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

}  // namespace meshgrade

#endif
