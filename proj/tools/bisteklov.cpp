#include <iostream>
#include <string>
#include <vector>

#include "bisteklov/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bisteklov::cli::run(args, std::cout, std::cerr);
}
