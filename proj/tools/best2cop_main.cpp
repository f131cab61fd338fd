#include <iostream>
#include <string>
#include <vector>

#include "best2cop/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return best2cop::cli::dispatch(args, std::cout, std::cerr);
}
