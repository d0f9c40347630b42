#include <iostream>
#include <string>
#include <vector>

#include "tandemq_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tandemq::cli::run(args, std::cout, std::cerr);
}
