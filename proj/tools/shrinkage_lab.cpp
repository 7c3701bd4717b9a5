#include <iostream>

#include "shrinkage/cli/commands.hpp"

int main(int argc, char** argv) {
  return shrinkage::cli::run_cli(argc, argv, std::cout, std::cerr);
}
