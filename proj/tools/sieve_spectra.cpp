#include <iostream>

#include "sieve/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return sieve::run_cli(args, std::cout, std::cerr);
}
