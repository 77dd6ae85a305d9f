#include <iostream>
#include <string>
#include <vector>

#include "balance_nets/cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return balance_nets::cli::run_cli(args, std::cout, std::cerr);
}
