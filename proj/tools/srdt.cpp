#include <iostream>

#include "srdt/cli.hpp"

int main(int argc, char** argv) { return srdt::run_cli(argc, argv, std::cout, std::cerr); }
