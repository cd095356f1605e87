#include "hexdg/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hexdg::run_cli(argc, argv, std::cout, std::cerr);
}
