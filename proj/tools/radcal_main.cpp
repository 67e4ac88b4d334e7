#include <iostream>

#include "radcal/cli.hpp"

int main(int argc, char** argv) {
  radcal::configure_logging_from_env();
  return radcal::run_cli(argc, argv, std::cout, std::cerr);
}
