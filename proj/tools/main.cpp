#include <gsuite/cli.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> env_config;
    if (const char* env = std::getenv("GSUITE_CONFIG")) {
        env_config = env;
    }
    return gsuite::cli::main_entry(args, std::cout, std::cerr, env_config);
}
