#include <iostream>

#include "poleswap_cli/cli.hpp"

int main(int argc, char** argv) { return poleswap::cli::run(argc, argv, std::cout, std::cerr); }
