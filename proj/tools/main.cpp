#include <iostream>

#include "uptail/cli.hpp"

int main(int argc, char** argv) { return uptail::cli_main(argc, argv, std::cout, std::cerr); }
