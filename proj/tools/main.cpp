#include <iostream>

#include "solvency/cli.hpp"

int main(int argc, char** argv) {
  return solvency::run_cli(argc, argv, std::cout, std::cerr);
}
