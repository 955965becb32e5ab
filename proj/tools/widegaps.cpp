#include <iostream>

#include "widegaps/cli.hpp"

int main(int argc, char** argv) {
    return widegaps::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
