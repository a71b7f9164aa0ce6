#include "dqo/numerics.hpp"

#include <cstdio>

namespace dqo::numerics {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace dqo::numerics
