#include <iostream>
#include <string>
#include <vector>

#include "adaptor/cli.hpp"

int main(int argc, char** argv) {
  return adaptor::cli::main_entry(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
