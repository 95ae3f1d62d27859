#include <iostream>

#include "heatkern/cli.hpp"

int main(int argc, char** argv) { return heatkern::cli::run(argc, argv, std::cout, std::cerr); }
