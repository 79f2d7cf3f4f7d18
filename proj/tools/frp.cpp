#include "frp/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return frp::cli::run(argc, argv, std::cout, std::cerr); }
