#include <iostream>

#include "cofix/cli.hpp"

int main(int argc, char** argv) {
    return cofix::cli::run(argc, argv, std::cout, std::cerr);
}
