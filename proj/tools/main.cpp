#include <string>
#include <vector>

#include "mpva/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mpva::cli::dispatch(args);
}
