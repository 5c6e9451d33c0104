// Acceptance gate, slow half: the two long-running search criteria.
// Exits nonzero if any criterion fails.

#include <cstdlib>
#include <iostream>

#include "grrforge/selftest.hpp"

int main() {
  const char* cache = std::getenv("GRRFORGE_CACHE");
  grrforge::AcceptanceSuite suite(cache ? cache : "");
  auto rs = suite.run_slow();
  grrforge::AcceptanceSuite::print(rs, std::cout);
  bool ok = grrforge::AcceptanceSuite::all_pass(rs);
  std::cout << (ok ? "acceptance (slow): ALL PASS\n" : "acceptance (slow): FAILURES\n");
  return ok ? 0 : 1;
}
