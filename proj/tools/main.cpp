#include <iostream>

#include "cli_app.hpp"

int main(int argc, char** argv) {
  return sph2::cli::run(argc, argv, std::cout, std::cerr);
}
