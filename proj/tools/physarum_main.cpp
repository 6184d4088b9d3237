#include <iostream>

#include "physarum/cli.hpp"

int main(int argc, char** argv) { return physarum::run_cli(argc, argv, std::cout, std::cerr); }
