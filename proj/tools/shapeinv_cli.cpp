#include <iostream>

#include "shapeinv/cli.hpp"

int main(int argc, char** argv) { return shapeinv::run_cli(argc, argv, std::cout, std::cerr); }
