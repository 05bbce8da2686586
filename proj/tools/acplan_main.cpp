#include <iostream>

#include "acplan/cli.hpp"

int main(int argc, char** argv) {
    return acplan::cli::run(argc, argv, std::cout, std::cerr);
}
