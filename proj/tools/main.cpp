#include <iostream>

#include "meshgrade/cli.hpp"

int main(int argc, char** argv) {
  return meshgrade::run_cli(argc, argv, std::cout, std::cerr);
}
