#include "powerslab/cli.hpp"

int main(int argc, char** argv) {
    std::ostringstream out;
    const int code = powerslab::cli::run(argc, argv, out, std::cerr);
    std::cout << out.str() << std::flush;
    return code;
}
