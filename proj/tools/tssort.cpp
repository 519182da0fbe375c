#include <iostream>
#include <string>
#include <vector>

#include "tssort/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tssort::cli::run(args, std::cin, std::cout, std::cerr);
}
