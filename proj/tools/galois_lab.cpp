#include "galois_lab/cli.hpp"

#include <iostream>

int main(int argc, char *argv[])
{
    return galois_lab::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
