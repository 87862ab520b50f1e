#include <iostream>

#include "trajeval/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return trajeval::cli::run(args, std::cout, std::cerr);
}
