#include <iostream>

#include "sgf/io/cli.hpp"

int main(int argc, char** argv) { return sgf::cli_dispatch(argc, argv, std::cout, std::cerr); }
