#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return nptest::cli::run(argc, argv, std::cout, std::cerr); }
