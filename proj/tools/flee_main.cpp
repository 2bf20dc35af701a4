#include <iostream>

#include "flee/cli/app.hpp"

int main(int argc, char** argv) { return flee::cli::run_cli(argc, argv, std::cout, std::cerr); }
