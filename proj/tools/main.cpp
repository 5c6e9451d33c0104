#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "grrforge/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const char* cache = std::getenv("GRRFORGE_CACHE");
  return grrforge::run_cli(args, std::cout, std::cerr, cache ? cache : "");
}
