#include <iostream>

#include "semidisp/cli.hpp"

int main(int argc, char** argv) { return semidisp::cli::run(argc, argv, std::cout, std::cerr); }
