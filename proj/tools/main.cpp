#include <iostream>

#include "rezeta/cli.hpp"

int main(int argc, char** argv) { return rezeta::cli::run(argc, argv, std::cout, std::cerr); }
