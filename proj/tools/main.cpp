#include <iostream>

#include "chaos_bounds/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return chaos_bounds::run_cli(std::move(args), std::cout, std::cerr);
}
