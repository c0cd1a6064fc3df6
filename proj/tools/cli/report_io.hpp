#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "so3fda/permutation.hpp"

namespace so3fda::cli {

/// Flat key=value text, one field per line, fixed key order.
void write_report(std::ostream& out, const TestReport& report);
/// index,statistic with index 0 the observed split.
void write_statistics_csv(std::ostream& out, const TestReport& report);

/// Parses key=value lines; blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_key_values(std::istream& in);

}  // namespace so3fda::cli
