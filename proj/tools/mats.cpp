#include <iostream>

#include "mats/cli/cli.hpp"

int main(int argc, char** argv) { return mats::cli::run(argc, argv, std::cout, std::cerr); }
