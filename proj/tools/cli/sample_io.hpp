#pragma once

// CSV sample files. Every file starts with a header naming its encoding:
//   curve_id,t,r11,r12,r13,r21,r22,r23,r31,r32,r33   (matrix, row-major)
//   curve_id,t,q1,q2,q3,q4                           (quaternion)
//   curve_id,t,ax,ay,az                              (euler_deg)
// Rows of one curve are contiguous or interleaved; curves keep the order in
// which their ids first appear.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "so3fda/curves.hpp"

namespace so3fda::cli {

enum class Encoding { kMatrix, kQuaternion, kEulerDeg };

Encoding parse_encoding(std::string_view tag);
std::string_view to_string(Encoding e);

/// Malformed input; the message carries file and line.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A curve as stored in a file: raw time stamps, not yet on a common grid.
struct RawCurve {
  std::string id;
  std::vector<double> t;
  std::vector<Rotation3> values;
};

struct RawSample {
  Encoding encoding = Encoding::kMatrix;
  std::vector<RawCurve> curves;
};

struct Sample {
  std::vector<std::string> ids;
  std::vector<RotCurve> curves;
};

RawSample read_raw_sample(std::istream& in, std::string_view source,
                          EulerConvention convention = kDefaultEulerConvention);
RawSample read_raw_sample_file(const std::string& path,
                               EulerConvention convention = kDefaultEulerConvention);

/// Rescales the time stamps linearly onto [0, 1] and resamples the curve
/// onto `grid` by geodesic interpolation.
RotCurve to_grid(const RawCurve& raw, const TimeGrid& grid);

Sample load_sample(const std::string& path, const TimeGrid& grid,
                   EulerConvention convention = kDefaultEulerConvention);

void write_sample(std::ostream& out, const Sample& sample, Encoding encoding,
                  EulerConvention convention = kDefaultEulerConvention);
void save_sample(const std::string& path, const Sample& sample, Encoding encoding,
                 EulerConvention convention = kDefaultEulerConvention);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
double parse_double(std::string_view text);

}  // namespace so3fda::cli
