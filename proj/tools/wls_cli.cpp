#include <iostream>

#include "wls/cli.hpp"

int main(int argc, char** argv) { return wls::cli::run(argc, argv, std::cout, std::cerr); }
