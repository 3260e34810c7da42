#include <cstdio>

#include "dipole/testkit/acceptance.hpp"

int main() {
  int failed = 0;
  for (const auto& r : dipole::testkit::run_acceptance()) {
    std::printf("[%s] AC%-2d %-36s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    failed += !r.passed;
  }
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
