#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return kmatrix::cli::run_cli(args, std::cout, std::cerr);
}
