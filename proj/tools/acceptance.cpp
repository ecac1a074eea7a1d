// Runs the ten acceptance suites and prints one PASS/FAIL line per criterion.
#include <cstdio>

#include "dpc/suites.hpp"

int main() {
  int failed = 0;
  for (const auto& entry : dpc::suite_registry()) {
    auto rep = dpc::run_suite(entry.name);
    std::printf("%s criterion %d %s: %s (%.1fs)\n", rep.pass() ? "PASS" : "FAIL", entry.criterion, entry.name.c_str(),
                entry.title.c_str(), rep.seconds);
    for (const auto& c : rep.checks)
      if (!c.pass()) std::printf("    %s: %zu of %zu failed; %s\n", c.name.c_str(), c.failures, c.cases, c.detail.c_str());
    std::fflush(stdout);
    failed += !rep.pass();
  }
  return failed == 0 ? 0 : 1;
}
