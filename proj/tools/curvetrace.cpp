#include <iostream>

#include "curvetrace/cli.hpp"

int main(int argc, char** argv) { return curvetrace::run_cli(argc, argv, std::cout, std::cerr); }
