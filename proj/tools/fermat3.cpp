#include <iostream>

#include <fermat3/cli.hpp>

int main(int argc, char **argv)
{
    return fermat3::cli::run(argc, argv, std::cout, std::cerr);
}
