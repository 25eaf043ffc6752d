#include <iostream>
#include <string>
#include <vector>

#include "c3b/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return c3b::cli::run(args, std::cout, std::cerr);
}
