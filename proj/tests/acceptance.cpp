// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iostream>

#include "polyaprod/validation.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
  }
  std::cout << "acceptance suite (seed " << seed << ")\n";
  bool all = true;
  for (const auto& r : polyaprod::run_acceptance_suite(seed)) {
    std::printf("%s  %-32s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
