#include <iostream>
#include <string>
#include <vector>

#include "riskpath/cli.hpp"

int main(int argc, char** argv) {
  return riskpath::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
