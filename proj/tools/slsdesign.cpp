#include <iostream>

#include "slsdesign/cli.hpp"

int main(int argc, char** argv) {
  return slsdesign::run_cli(argc, argv, std::cout, std::cerr);
}
