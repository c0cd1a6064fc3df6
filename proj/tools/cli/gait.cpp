#include "cli/gait.hpp"

#include <map>

namespace so3fda::cli {

Sample knee_curves(const RawSample& upper, const RawSample& lower, const TimeGrid& grid) {
  std::map<std::string, const RawCurve*> by_id;
  for (const auto& c : lower.curves) by_id[c.id] = &c;
  if (by_id.size() != upper.curves.size()) {
    throw Error("gait: the upper and lower files contain different curve ids");
  }
  Sample out;
  for (const auto& u : upper.curves) {
    const auto it = by_id.find(u.id);
    if (it == by_id.end()) throw Error("gait: curve '" + u.id + "' is missing from the lower-leg file");
    const RawCurve& l = *it->second;
    if (u.t != l.t) {
      throw GridMismatchError("gait: curve '" + u.id + "' has different time stamps in the two files");
    }
    RawCurve knee{u.id, u.t, {}};
    knee.values.reserve(u.values.size());
    for (std::size_t k = 0; k < u.values.size(); ++k) {
      knee.values.push_back(u.values[k] * l.values[k].transpose());
    }
    out.ids.push_back(u.id);
    out.curves.push_back(to_grid(knee, grid));
  }
  return out;
}

void cmd_gait(const std::string& upper, const std::string& lower, const std::string& out,
              const TimeGrid& grid, Encoding encoding, EulerConvention convention) {
  const RawSample u = read_raw_sample_file(upper, convention);
  const RawSample l = read_raw_sample_file(lower, convention);
  save_sample(out, knee_curves(u, l, grid), encoding, convention);
}

}  // namespace so3fda::cli
