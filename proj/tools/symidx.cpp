#include <iostream>

#include "symidx/cli.hpp"

int main(int argc, char** argv) {
  return symidx::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
