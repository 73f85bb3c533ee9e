#include <iostream>

#include "fpgrank/cli.hpp"

int main(int argc, char** argv) { return fpgrank::run_cli(argc, argv, std::cout, std::cerr); }
