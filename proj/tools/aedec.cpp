#include <iostream>

#include "aed/cli.hpp"

int main(int argc, char** argv) { return aed::run_cli(argc, argv, std::cout, std::cerr); }
