#include <iostream>

#include "qwitness/cli.hpp"

int main(int argc, char** argv) { return qwitness::run_cli(argc, argv, std::cout, std::cerr); }
