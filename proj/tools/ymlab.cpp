#include <iostream>

#include "ymlab/cli/dispatch.hpp"

int main(int argc, char** argv) { return ymlab::cli::run(argc, argv, std::cout, std::cerr); }
