#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <set>
#include <string>

#include "criteria.hpp"
#include "so3fda/error.hpp"
#include "so3fda/parallel.hpp"

using so3fda::acceptance::Line;
using so3fda::acceptance::Tier;

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string tier_tag = "smoke";
  std::vector<int> only;
  std::size_t threads = 0;
  bool verbose = false;
  app.add_option("--tier", tier_tag, "smoke or desk")->check(CLI::IsMember({"smoke", "desk"}))->capture_default_str();
  app.add_option("--only", only, "Run only these criteria (repeatable)");
  app.add_option("--threads", threads, "Worker threads, 0 for all cores")->capture_default_str();
  app.add_flag("-v,--verbose", verbose, "Print every sub-check");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  so3fda::set_worker_threads(threads);
  const Tier tier = tier_tag == "desk" ? Tier::kDesk : Tier::kSmoke;
  const std::set<int> selected(only.begin(), only.end());

  bool all_pass = true;
  for (const auto& c : so3fda::acceptance::all_criteria()) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    so3fda::acceptance::Outcome out;
    try {
      out = c.run(tier);
    } catch (const std::exception& e) {
      out.check(false, std::string("unexpected exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all_pass = all_pass && out.pass();
    std::printf("criterion %2d: %s  %s (%s tier, %.1f s)\n", c.id, out.pass() ? "PASS" : "FAIL", c.title,
                tier_tag.c_str(), secs);
    for (const auto& l : out.lines()) {
      if (!verbose && l.kind == Line::Kind::kPass) continue;
      const char* tag = l.kind == Line::Kind::kPass ? "ok  " : l.kind == Line::Kind::kFail ? "FAIL" : "    ";
      std::printf("    %s %s\n", tag, l.text.c_str());
    }
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
