#include <iostream>
#include <string>
#include <vector>

#include "choquard/cli.hpp"

int main(int argc, char** argv) {
  return choquard::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
