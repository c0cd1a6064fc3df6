#pragma once

// Knee-angle curves from upper- and lower-leg frame curves.

#include <string>

#include "cli/sample_io.hpp"

namespace so3fda::cli {

/// gamma = E_u E_l^T per curve id, computed on the recorded time stamps and
/// then moved onto `grid`. Throws Error when the ids differ and
/// GridMismatchError when an id's time stamps differ between the files.
Sample knee_curves(const RawSample& upper, const RawSample& lower, const TimeGrid& grid);

void cmd_gait(const std::string& upper, const std::string& lower, const std::string& out,
              const TimeGrid& grid, Encoding encoding,
              EulerConvention convention = kDefaultEulerConvention);

}  // namespace so3fda::cli
