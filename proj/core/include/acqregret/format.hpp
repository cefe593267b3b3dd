#pragma once

#include <string>

namespace acqregret {

/// Shortest decimal text that parses back to exactly v. NaN gives "".
std::string FormatDouble(double v);

}  // namespace acqregret
