#include <iostream>

#include "posgood/cli.hpp"

int main(int argc, char** argv) { return posgood::run_cli(argc, argv, std::cout, std::cerr); }
