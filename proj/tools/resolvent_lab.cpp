#include <resolvent_lab/cli.hpp>

int main(int argc, char** argv) {
    return reslab::cli::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
