#include <iostream>

#include "primforms/cli.hpp"

int main(int argc, char** argv) { return pf::cli::run(argc, argv, std::cout, std::cerr); }
