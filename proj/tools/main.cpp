#include <iostream>
#include <string>
#include <vector>

#include "sciontology/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sciontology::run_cli(args, std::cout, std::cerr);
}
