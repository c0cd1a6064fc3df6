#include "cli/sample_io.hpp"

#include <Eigen/LU>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <system_error>

namespace so3fda::cli {

namespace {

constexpr double kProjectTol = 1e-3;
constexpr double kQuatNormTol = 1e-3;

const std::vector<std::string>& payload_columns(Encoding e) {
  static const std::vector<std::string> matrix = {"r11", "r12", "r13", "r21", "r22",
                                                  "r23", "r31", "r32", "r33"};
  static const std::vector<std::string> quat = {"q1", "q2", "q3", "q4"};
  static const std::vector<std::string> euler = {"ax", "ay", "az"};
  switch (e) {
    case Encoding::kMatrix: return matrix;
    case Encoding::kQuaternion: return quat;
    case Encoding::kEulerDeg: return euler;
  }
  return matrix;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

Rotation3 decode_matrix(const std::vector<double>& x, const std::string& ctx) {
  Mat3 m;
  m << x[0], x[1], x[2], x[3], x[4], x[5], x[6], x[7], x[8];
  if (Rotation3::is_valid(m)) return Rotation3::unchecked(m);
  const double residual = (m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (residual > kProjectTol || m.determinant() <= 0.0) {
    throw FormatError(ctx + "matrix is not a rotation (orthonormality residual " +
                      format_double(residual) + ")");
  }
  return project_so3(m).rotation;
}

Rotation3 decode_quaternion(const std::vector<double>& x, const std::string& ctx) {
  const Vec4 q(x[0], x[1], x[2], x[3]);
  if (std::abs(q.norm() - 1.0) > kQuatNormTol) {
    throw FormatError(ctx + "quaternion norm " + format_double(q.norm()) + " is not 1");
  }
  return quat_to_rot(UnitQuaternion::normalized(q));
}

}  // namespace

Encoding parse_encoding(std::string_view tag) {
  if (tag == "matrix") return Encoding::kMatrix;
  if (tag == "quaternion") return Encoding::kQuaternion;
  if (tag == "euler_deg") return Encoding::kEulerDeg;
  throw Error("unknown encoding '" + std::string(tag) + "' (expected matrix, quaternion, euler_deg)");
}

std::string_view to_string(Encoding e) {
  switch (e) {
    case Encoding::kMatrix: return "matrix";
    case Encoding::kQuaternion: return "quaternion";
    case Encoding::kEulerDeg: return "euler_deg";
  }
  return "?";
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last || text.empty()) {
    throw FormatError("not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(x)) throw FormatError("not a finite number: '" + std::string(text) + "'");
  return x;
}

RawSample read_raw_sample(std::istream& in, std::string_view source, EulerConvention convention) {
  std::string line;
  std::size_t line_no = 0;
  // Header: first non-empty line.
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    line.clear();
  }
  if (line.empty()) throw FormatError(std::string(source) + ": empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_csv(line);
  RawSample sample;
  bool matched = false;
  for (const Encoding e : {Encoding::kMatrix, Encoding::kQuaternion, Encoding::kEulerDeg}) {
    const auto& cols = payload_columns(e);
    if (header.size() != cols.size() + 2 || header[0] != "curve_id" || header[1] != "t") continue;
    bool ok = true;
    for (std::size_t i = 0; i < cols.size(); ++i) ok = ok && header[i + 2] == cols[i];
    if (ok) {
      sample.encoding = e;
      matched = true;
      break;
    }
  }
  if (!matched) throw FormatError(where(source, line_no) + "unrecognized header '" + line + "'");

  const std::size_t width = payload_columns(sample.encoding).size() + 2;
  std::map<std::string, std::size_t, std::less<>> index;
  std::vector<double> payload(width - 2);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string ctx = where(source, line_no);
    const auto fields = split_csv(line);
    if (fields.size() != width) {
      throw FormatError(ctx + "expected " + std::to_string(width) + " fields, found " +
                        std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw FormatError(ctx + "empty curve_id");
    double t = 0.0;
    try {
      t = parse_double(fields[1]);
      for (std::size_t i = 0; i + 2 < width; ++i) payload[i] = parse_double(fields[i + 2]);
    } catch (const FormatError& e) {
      throw FormatError(ctx + e.what());
    }

    Rotation3 r;
    switch (sample.encoding) {
      case Encoding::kMatrix: r = decode_matrix(payload, ctx); break;
      case Encoding::kQuaternion: r = decode_quaternion(payload, ctx); break;
      case Encoding::kEulerDeg: r = euler_to_rot({payload[0], payload[1], payload[2]}, convention); break;
    }

    auto it = index.find(fields[0]);
    if (it == index.end()) {
      it = index.emplace(std::string(fields[0]), sample.curves.size()).first;
      sample.curves.push_back({std::string(fields[0]), {}, {}});
    }
    RawCurve& c = sample.curves[it->second];
    if (!c.t.empty() && !(t > c.t.back())) {
      throw FormatError(ctx + "time stamps of curve '" + c.id + "' are not increasing");
    }
    c.t.push_back(t);
    c.values.push_back(r);
  }
  for (const auto& c : sample.curves) {
    if (c.t.size() < 2) {
      throw FormatError(std::string(source) + ": curve '" + c.id + "' has fewer than two samples");
    }
  }
  return sample;
}

RawSample read_raw_sample_file(const std::string& path, EulerConvention convention) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return read_raw_sample(in, path, convention);
}

RotCurve to_grid(const RawCurve& raw, const TimeGrid& grid) {
  const double t0 = raw.t.front();
  const double span = raw.t.back() - t0;
  std::vector<double> t(raw.t.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = (raw.t[k] - t0) / span;
  t.front() = 0.0;
  t.back() = 1.0;
  const RotCurve native(TimeGrid(std::move(t)), raw.values);
  if (native.grid() == grid) return native;
  return resample(native, grid);
}

Sample load_sample(const std::string& path, const TimeGrid& grid, EulerConvention convention) {
  const RawSample raw = read_raw_sample_file(path, convention);
  Sample out;
  for (const auto& c : raw.curves) {
    out.ids.push_back(c.id);
    try {
      out.curves.push_back(to_grid(c, grid));
    } catch (const Error& e) {
      throw FormatError(path + ": curve '" + c.id + "': " + e.what());
    }
  }
  if (out.curves.empty()) throw FormatError(path + ": no curves");
  return out;
}

void write_sample(std::ostream& out, const Sample& sample, Encoding encoding,
                  EulerConvention convention) {
  out << "curve_id,t";
  for (const auto& c : payload_columns(encoding)) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < sample.curves.size(); ++i) {
    const RotCurve& c = sample.curves[i];
    const std::string id = i < sample.ids.size() ? sample.ids[i] : std::to_string(i);
    for (std::size_t k = 0; k < c.size(); ++k) {
      out << id << ',' << format_double(c.grid()[k]);
      switch (encoding) {
        case Encoding::kMatrix:
          for (int r = 0; r < 3; ++r)
            for (int col = 0; col < 3; ++col) out << ',' << format_double(c[k](r, col));
          break;
        case Encoding::kQuaternion: {
          const UnitQuaternion q = rot_to_quat(c[k]);
          for (int j = 0; j < 4; ++j) out << ',' << format_double(q[j]);
          break;
        }
        case Encoding::kEulerDeg: {
          const EulerAngles e = rot_to_euler(c[k], convention);
          out << ',' << format_double(e.ax) << ',' << format_double(e.ay) << ',' << format_double(e.az);
          break;
        }
      }
      out << '\n';
    }
  }
}

void save_sample(const std::string& path, const Sample& sample, Encoding encoding,
                 EulerConvention convention) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_sample(out, sample, encoding, convention);
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace so3fda::cli
