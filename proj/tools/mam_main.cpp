#include "mam/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return mam::cli::run(argc, argv, std::cout, std::cerr);
}
