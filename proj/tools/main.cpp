#include <iostream>
#include <string>
#include <vector>

#include <fsbasis/cli.hpp>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return fsbasis::cli::run(args, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "fsbasis: " << e.what() << '\n';
        return 3;
    }
}
