#include "schottky/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string out, err;
    const int status = schottky::cli::run(args, out, err);
    std::cout << out;
    if (!err.empty()) {
        // machine-readable on stdout, human-readable on stderr
        std::cout << err;
        std::cerr << "schottky: " << schottky::io::Json::parse(err)["message"].get<std::string>() << '\n';
    }
    return status;
}
