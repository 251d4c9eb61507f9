#include <iostream>

#include "command.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flatrat::cli::run_command(args, std::cout, std::cerr);
}
