#include <iostream>

#include "pyrafuse/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return pyrafuse::cli_main(args, std::cout, std::cerr);
}
