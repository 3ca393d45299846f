#include <iostream>

#include "fracpme/cli.hpp"

int main(int argc, char** argv) {
    return fracpme::cli::main(argc, argv, std::cout, std::cerr);
}
