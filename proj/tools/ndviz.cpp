#include <iostream>

#include "ndviz/cli.hpp"

int main(int argc, char** argv) { return ndviz::run_cli(argc, argv, std::cout, std::cerr); }
