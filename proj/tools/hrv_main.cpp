#include "hrv/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hrv::run_cli(argc, argv, std::cout, std::cerr); }
