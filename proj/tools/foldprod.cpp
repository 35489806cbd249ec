#include <iostream>
#include <string>
#include <vector>

#include "foldprod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return foldprod::run_main(args, std::cout, std::cerr);
}
