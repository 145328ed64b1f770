#include <iostream>

#include "r2o/cli.hpp"

int main(int argc, char** argv) {
  return r2o::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
