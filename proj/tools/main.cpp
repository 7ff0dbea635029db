#include <iostream>

#include "qhb/cli.hpp"

int main(int argc, char** argv) {
  return qhb::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
