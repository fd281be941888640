#include <pp10/cli.hpp>

#include <iostream>

int main(int argc, char **argv) { return pp10::cli::run(argc, argv, std::cout, std::cerr); }
