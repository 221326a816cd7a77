#include <iostream>

#include "subcov/acceptance.hpp"

int main() {
  return subcov::acceptance::run_checks(subcov::acceptance::acceptance_checks(), "", true,
                                        std::cout);
}
