#include <iostream>

#include "i3322/cli.hpp"

int main(int argc, char** argv) {
  return i3322::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
