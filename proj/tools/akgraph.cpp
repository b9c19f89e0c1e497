#include "akgraph/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return akgraph::run_cli(argc, argv, std::cout, std::cerr); }
