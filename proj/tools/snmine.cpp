#include <iostream>
#include <string>
#include <vector>

#include "snmine/cli.hpp"

int main(int argc, char** argv) {
  return snmine::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
