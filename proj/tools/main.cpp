#include <iostream>

#include "imspekit/cli.hpp"

int main(int argc, char** argv) {
  return imspekit::run_cli(argc, argv, std::cout, std::cerr);
}
