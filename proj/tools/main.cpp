#include <iostream>

#include "strange_lab/cli.hpp"

int main(int argc, char** argv) {
  return strange_lab::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
