#include <iostream>

#include "dyad/cli.hpp"

int main(int argc, char** argv) {
  return dyad::cli::run(std::vector<std::string>(argv, argv + argc), std::cin, std::cout, std::cerr);
}
