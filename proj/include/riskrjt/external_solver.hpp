#pragma once

#include "riskrjt/mip_model.hpp"
#include "riskrjt/solution.hpp"

#include <filesystem>
#include <optional>
#include <regex>
#include <string>

namespace riskrjt {

/// How to read a solver's output. `pair` must capture the variable name and
/// its value; any match of `infeasible` in the output means no solution.
struct SolutionAdapter {
    std::string name = "name-value";
    std::regex pair{R"(^\s*([A-Za-z_][A-Za-z0-9_]*)\s+([-+]?(?:[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?|inf|nan))\s*$)"};
    std::regex infeasible{R"(\binfeasible\b)", std::regex::icase};
    /// Variables absent from the listing are taken as 0 instead of failing.
    bool missing_as_zero = false;
};

SolutionAdapter default_adapter();
/// Layout printed by CBC/GLPK-style solution files: "<idx> <name> <value> <obj-coef>".
SolutionAdapter indexed_adapter();

class SolverError : public Error {
public:
    enum class Kind { Launch, ExitCode, Parse, MissingVariable };
    SolverError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

struct ExternalOptions {
    /// Shell command; `{lp}` is replaced by the model path and `{sol}`, when
    /// present, by a path the solver writes its listing to (stdout is read
    /// otherwise).
    std::string command;
    SolutionAdapter adapter = default_adapter();
    double tolerance = 1e-6;
    /// Directory for the temporary files; the system temp dir by default.
    std::filesystem::path workdir;
    bool keep_files = false;
};

/// Environment variable holding the default solver command template.
inline constexpr const char* kSolverEnv = "RISKRJT_SOLVER";
std::optional<std::string> solver_command_from_env();

/// Writes the model, runs the solver, parses the listing and re-checks every
/// row, bound and integrality at `tolerance`. Any violation turns an optimal
/// status into Unknown with diagnostics.
Solution solve_external(const MipModel& model, const ExternalOptions& options);

/// Parses a solver listing against the model (exposed for tests).
Solution parse_solution(const MipModel& model, const std::string& output, const SolutionAdapter& adapter,
                        double tolerance);

}  // namespace riskrjt
