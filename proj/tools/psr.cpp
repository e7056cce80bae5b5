#include <iostream>

#include "psr/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return psr::cli::dispatch(args, std::cin, std::cout, std::cerr);
}
