#include <iostream>

#include "netduopoly/cli.hpp"

int main(int argc, char** argv) {
  return netduopoly::run_cli(argc, argv, std::cout, std::cerr);
}
