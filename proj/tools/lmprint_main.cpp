#include <iostream>

#include "lmprint/cli.hpp"

int main(int argc, char** argv) {
  return lmprint::cli::run(argc, argv, std::cout, std::cerr);
}
