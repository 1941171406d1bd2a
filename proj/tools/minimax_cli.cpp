#include <iostream>
#include <string>
#include <vector>

#include "minimax/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return minimax::cli::execute(std::move(args), std::cout, std::cerr);
}
