#include <iostream>

#include "lhv/cli.hpp"

int main(int argc, char** argv) { return lhv::cli::run(argc, argv, std::cout, std::cerr); }
