#include <iostream>
#include <string>
#include <vector>

#include "geonet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return geonet::cli::run(args, std::cout, std::cerr);
}
