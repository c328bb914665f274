#include <iostream>
#include <string>
#include <vector>

#include "aadb/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return aadb::runCli(args, std::cout, std::cerr);
}
