#include <iostream>

#include "onedigit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return onedigit::cli::run(args, std::cout, std::cerr);
}
