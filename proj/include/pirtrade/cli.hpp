#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pirtrade::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kVerificationFailed = 2,
    kResourceGuard = 3,
};

struct Outcome {
    int exit_code = kOk;
    std::string out;
    std::string err;
};

inline constexpr const char* kBudgetEnv = "PIRTRADE_VERIFY_BUDGET";
inline constexpr int kDefaultLpServerLimit = 5;

/// Reads the verification budget from the environment; nullopt if unset.
/// Throws std::invalid_argument on a malformed value.
std::optional<std::uint64_t> budget_from_env();

/// Runs one invocation. `args` excludes the program name. With --out the
/// report goes to that file and `out` stays empty.
Outcome run(const std::vector<std::string>& args, std::optional<std::uint64_t> budget = std::nullopt);

}  // namespace pirtrade::cli
