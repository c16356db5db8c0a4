#pragma once

#include <charconv>
#include <string>

namespace harnack {

/// Shortest decimal string that round-trips to the same double.
inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace harnack
