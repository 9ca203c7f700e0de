#include <iostream>

#include "dynlog/io.hpp"

int main(int argc, char** argv) {
  return dynlog::run_command(argc, argv, std::cout, std::cerr);
}
