#include <cstdlib>
#include <iostream>

#include "sympfactor/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20260808;
  if (const char* env = std::getenv("SYMPFACTOR_SEED")) seed = std::strtoull(env, nullptr, 10);
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  sympfactor::Tolerances tol;
  auto result = sympfactor::run_acceptance(seed, tol, std::cout);
  std::cout << result.passed << " passed, " << result.failed << " failed\n";
  return result.ok() ? 0 : 1;
}
