#include <iostream>
#include <string>
#include <vector>

#include "pirtrade/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::uint64_t> budget;
    try {
        budget = pirtrade::cli::budget_from_env();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pirtrade::cli::kUsage;
    }
    const auto r = pirtrade::cli::run(args, budget);
    std::cout << r.out;
    std::cerr << r.err;
    return r.exit_code;
}
