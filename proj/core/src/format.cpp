#include "acqregret/format.hpp"

#include <charconv>
#include <cmath>

namespace acqregret {

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace acqregret
