#include <iostream>

#include "qos/cli.hpp"

int main(int argc, char** argv) {
  return qos::run_cli(argc, argv, std::cout, std::cerr);
}
