#include <iostream>

#include "ghzsim/cli/app.hpp"

int main(int argc, char** argv) {
  return ghzsim::cli::run_app(argc, argv, std::cout, std::cerr);
}
