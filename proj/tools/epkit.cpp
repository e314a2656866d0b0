#include <iostream>

#include "epkit/cli.hpp"

int main(int argc, char** argv) { return epkit::cli::main(argc, argv, std::cout, std::cerr); }
