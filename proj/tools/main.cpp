#include <iostream>

#include "dpwm/cli.hpp"

int main(int argc, char** argv) { return dpwm::cli::run(argc, argv, std::cout, std::cerr); }
