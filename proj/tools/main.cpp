#include <iostream>

#include "cavnoise/cli.hpp"

int main(int argc, char** argv) { return cavnoise::cli::run(argc, argv, std::cout, std::cerr); }
