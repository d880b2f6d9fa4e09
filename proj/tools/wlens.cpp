#include <iostream>

#include "wlens/cli.hpp"

int main(int argc, char** argv) {
  return wlens::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
