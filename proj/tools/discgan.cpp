#include <iostream>

#include "discgan/cli/commands.hpp"

int main(int argc, char** argv) { return discgan::cli::run_cli(argc, argv, std::cout, std::cerr); }
