#include <iostream>
#include <string>
#include <vector>

#include "tgp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tgp::cli::run(args, std::cout, std::cerr);
}
