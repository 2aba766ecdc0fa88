#include "dcsarch/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return dcsarch::cli_main(argc, argv, std::cout, std::cerr);
}
