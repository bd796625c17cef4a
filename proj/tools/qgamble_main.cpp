#include <iostream>
#include <string>

#include "qgamble/cli.hpp"

int main(int argc, char** argv) {
    std::string out;
    std::string err;
    const int code = qgamble::cli::main_entry(argc, argv, out, err);
    std::cout << out;
    std::cerr << err;
    return code;
}
