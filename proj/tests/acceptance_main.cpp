// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. Seed defaults to 0xF5EE; FPS_SEED or argv[1] overrides.

#include "fps/selftest.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  std::uint64_t seed = 0xF5EE;
  if (const char* env = std::getenv("FPS_SEED")) seed = std::strtoull(env, nullptr, 0);
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 0);
  const int failures = fps::run_selftest(seed, std::cout);
  return failures == 0 ? 0 : 1;
}
