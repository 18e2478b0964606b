#include "sfw/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return sfw::run_cli(argc, argv, std::cout, std::cerr); }
