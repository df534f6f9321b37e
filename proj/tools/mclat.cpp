#include <iostream>

#include "mclat/cli.hpp"

int main(int argc, char** argv) {
  return mclat::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
