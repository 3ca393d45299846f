#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

namespace fracpme::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInvalidInput = 1,
    kNumericalFailure = 2,
    kPropertyFailure = 3,
};

struct Flags {
    std::filesystem::path out = "./out";
    bool strict_cfl = false;
    bool full_field = false;
    bool quiet = false;
};

struct Run {
    std::filesystem::path config;
};
struct ConvergeSelf {
    std::filesystem::path config;
    std::vector<double> dx_list;
    double dx_ref = 0.0;
};
struct ConvergeExact {
    std::vector<double> dx_list{1.0, 0.5, 0.25};
};
struct Verify {
    std::filesystem::path config;
    std::optional<std::filesystem::path> pair;
};
struct Info {
    std::optional<std::filesystem::path> config;
};

using Command = std::variant<Run, ConvergeSelf, ConvergeExact, Verify, Info>;

/// Executes one command, writing result files under flags.out. Diagnostics go
/// to `err`, progress and summaries to `out` (suppressed by flags.quiet).
int execute(const Command& command, const Flags& flags, std::ostream& out, std::ostream& err);

/// Parses argv into a command and executes it.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fracpme::cli
