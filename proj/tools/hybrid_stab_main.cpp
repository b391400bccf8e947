#include <iostream>

#include "hybrid_stab/cli.hpp"

int main(int argc, char** argv) {
  return hybrid_stab::cli::run(argc, argv, std::cout, std::cerr);
}
