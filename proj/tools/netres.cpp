#include <iostream>
#include <string>
#include <vector>

#include "netres/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return netres::cli::main(args, std::cout, std::cerr);
}
