#include <iostream>

#include "fraclab/lab/acceptance.hpp"

int main() {
  const auto results = fraclab::lab::run_acceptance({}, std::cout);
  bool ok = true;
  for (const auto& r : results)
    if (r.blocking && !r.pass) ok = false;
  return ok ? 0 : 1;
}
