#include <iostream>

#include "choquard_cli/cli.hpp"

int main(int argc, char** argv) { return choquard::cli::run(argc, argv, std::cout, std::cerr); }
