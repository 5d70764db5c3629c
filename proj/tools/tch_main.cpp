#include <iostream>

#include "tch/cli/commands.hpp"

int main(int argc, char** argv) { return tch::cli::run(argc, argv, std::cout, std::cerr); }
