#include <iostream>

#include "symsq/acceptance.hpp"

int main() {
  const auto results = symsq::run_acceptance_suite(std::cout);
  for (const auto &r : results)
    if (!r.pass)
      return 1;
  return 0;
}
