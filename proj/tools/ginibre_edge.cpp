#include "ginibre/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ginibre::run_cli(argc, argv, std::cout, std::cerr); }
