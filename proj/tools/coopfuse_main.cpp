#include <iostream>

#include "coopfuse/cli.hpp"

int main(int argc, char** argv) { return coopfuse::run_cli(argc, argv, std::cout, std::cerr); }
