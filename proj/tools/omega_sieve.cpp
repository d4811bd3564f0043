#include <iostream>
#include <string>
#include <vector>

#include "omega_sieve/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return omega_sieve::run_cli(args, std::cout, std::cerr);
}
