#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return broadbid::cli::run(argc, argv, std::cout, std::cerr);
}
