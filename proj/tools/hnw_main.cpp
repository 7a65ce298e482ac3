#include <iostream>

#include "hnw/cli.hpp"

int main(int argc, char** argv) { return hnw::run_cli(argc, argv, std::cout, std::cerr); }
