#include <iostream>

#include "cje/harness/cli.hpp"

int main(int argc, char** argv) {
  return cje::harness::run_cli(argc, argv, std::cout, std::cerr);
}
