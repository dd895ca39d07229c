#include <iostream>
#include <vector>

#include "wronbeta/cli.hpp"

int main(int argc, char** argv)
{
    try {
        const std::vector<std::string> args(argv + 1, argv + argc);
        const wronbeta::RunConfig cfg = wronbeta::parse_args(args);
        return wronbeta::run(cfg);
    } catch (const wronbeta::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
