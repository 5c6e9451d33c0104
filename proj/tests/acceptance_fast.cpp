// Acceptance gate, fast half: one pass/fail line per shipped guarantee.
// Exits nonzero if any criterion fails.

#include <cstdlib>
#include <iostream>

#include "grrforge/selftest.hpp"

int main() {
  const char* cache = std::getenv("GRRFORGE_CACHE");
  grrforge::AcceptanceSuite suite(cache ? cache : "");
  auto rs = suite.run_fast();
  grrforge::AcceptanceSuite::print(rs, std::cout);
  bool ok = grrforge::AcceptanceSuite::all_pass(rs);
  std::cout << (ok ? "acceptance (fast): ALL PASS\n" : "acceptance (fast): FAILURES\n");
  return ok ? 0 : 1;
}
