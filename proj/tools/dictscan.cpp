#include <iostream>

#include "dictscan/cli.hpp"

int main(int argc, char** argv) {
    return dictscan::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
