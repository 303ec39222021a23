#include <iostream>

#include "areal/cli.hpp"

int main(int argc, char** argv) { return areal::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
