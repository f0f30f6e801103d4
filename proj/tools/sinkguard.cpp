#include <iostream>
#include <string>
#include <vector>

#include "sinkguard/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sinkguard::run_cli(args, std::cout, std::cerr);
}
