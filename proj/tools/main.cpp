#include <iostream>
#include <string>
#include <vector>

#include "fskyline/io.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return fskyline::io::run_command(args, std::cout, std::cerr);
}
