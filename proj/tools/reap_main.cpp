#include <iostream>

#include "reap/cli.hpp"

int main(int argc, char** argv) {
  return reap::run_cli(argc, argv, std::cout, std::cerr);
}
