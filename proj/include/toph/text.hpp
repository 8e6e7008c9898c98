#pragma once

#include <cstdio>
#include <string>

namespace toph {

/// printf("%.17g"): 17 significant digits, enough to round-trip any double.
inline std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace toph
