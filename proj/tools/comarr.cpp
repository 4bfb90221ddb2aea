#include <iostream>
#include <string>
#include <vector>

#include "comarr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return comarr::cli::run(args, std::cout, std::cerr);
}
