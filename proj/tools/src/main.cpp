#include <iostream>
#include <string>
#include <vector>

#include "qpurify/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qpurify::cli::run(args, std::cout, std::cerr);
}
