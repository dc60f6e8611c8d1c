#include "l1l2/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return l1l2::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
