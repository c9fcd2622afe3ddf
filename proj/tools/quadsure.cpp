#include <iostream>

#include "quadsure/cli.hpp"

int main(int argc, char** argv) {
  return quadsure::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
