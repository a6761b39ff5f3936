#include <iostream>

#include "sepcrit/cli.hpp"

int main(int argc, char** argv) { return sepcrit::cli::run(argc, argv, std::cout, std::cerr); }
