#include "cli/report_io.hpp"

#include <istream>
#include <ostream>

#include "cli/sample_io.hpp"

namespace so3fda::cli {

void write_report(std::ostream& out, const TestReport& r) {
  out << "variant=" << to_string(r.variant) << '\n'
      << "loss=" << to_string(r.loss) << '\n'
      << "tie_rule=" << to_string(r.tie_rule) << '\n'
      << "seed=" << r.seed << '\n'
      << "alpha=" << format_double(r.alpha) << '\n'
      << "n1=" << r.n1 << '\n'
      << "n2=" << r.n2 << '\n'
      << "n_perm=" << r.statistics_perm.size() << '\n'
      << "exhaustive=" << (r.exhaustive ? "true" : "false") << '\n'
      << "statistic_observed=" << format_double(r.statistic_observed) << '\n'
      << "p_value=" << format_double(r.p_value) << '\n'
      << "reject=" << (r.reject ? "true" : "false") << '\n';
}

void write_statistics_csv(std::ostream& out, const TestReport& r) {
  out << "index,statistic\n";
  for (std::size_t i = 0; i < r.statistics_perm.size(); ++i) {
    out << i << ',' << format_double(r.statistics_perm[i]) << '\n';
  }
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("line " + std::to_string(line_no) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

}  // namespace so3fda::cli
