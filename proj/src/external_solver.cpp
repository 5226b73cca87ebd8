#include "riskrjt/external_solver.hpp"

#include "riskrjt/lp_format.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

namespace riskrjt {

SolutionAdapter default_adapter() { return {}; }

SolutionAdapter indexed_adapter() {
    SolutionAdapter a;
    a.name = "indexed";
    a.pair = std::regex(
        R"(^\s*[0-9]+\s+([A-Za-z_][A-Za-z0-9_]*)\s+([-+]?[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)(?:\s+\S+)?\s*$)");
    a.missing_as_zero = true;
    return a;
}

std::optional<std::string> solver_command_from_env() {
    const char* v = std::getenv(kSolverEnv);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

std::string shell_quote(const std::string& s) { return "'" + replace_all(s, "'", "'\\''") + "'"; }

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

Solution parse_solution(const MipModel& model, const std::string& output, const SolutionAdapter& adapter,
                        double tolerance) {
    Solution sol;
    if (std::regex_search(output, adapter.infeasible)) {
        sol.status = SolveStatus::Infeasible;
        return sol;
    }
    const std::size_t n = model.variables().size();
    std::vector<double> values(n, std::nan(""));
    std::istringstream lines(output);
    std::string line;
    std::smatch m;
    while (std::getline(lines, line)) {
        if (!std::regex_match(line, m, adapter.pair)) continue;
        auto id = model.find(m[1].str());
        if (!id) continue;
        values[id->index] = std::strtod(m[2].str().c_str(), nullptr);
    }
    std::size_t missing = 0;
    std::string first_missing;
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isnan(values[k])) continue;
        if (adapter.missing_as_zero) {
            values[k] = 0.0;
        } else {
            if (missing++ == 0) first_missing = model.variables()[k].name;
        }
    }
    if (missing > 0) {
        throw SolverError(SolverError::Kind::MissingVariable,
                          "solver output lacks " + std::to_string(missing) + " variable(s), first " + first_missing);
    }
    sol.values = std::move(values);
    sol.objective = model.objective_value(sol.values);
    sol.status = SolveStatus::Optimal;

    const auto violations = check_assignment(model, sol.values, tolerance);
    if (!violations.empty()) {
        sol.status = SolveStatus::Unknown;
        const std::size_t rows = model.constraints().size();
        for (std::size_t k = 0; k < violations.size() && k < 10; ++k) {
            const auto& v = violations[k];
            std::ostringstream msg;
            if (v.row < rows) {
                const auto& row = model.constraints()[v.row];
                msg << "row c" << v.row + 1 << " (" << row.tag << ") violated by " << v.amount;
            } else {
                msg << "variable " << model.variables()[v.row - rows].name << " off its domain by " << v.amount;
            }
            sol.diagnostics.push_back(msg.str());
        }
        if (violations.size() > 10) {
            sol.diagnostics.push_back("... " + std::to_string(violations.size() - 10) + " more");
        }
    }
    return sol;
}

Solution solve_external(const MipModel& model, const ExternalOptions& options) {
    if (options.command.empty()) {
        throw SolverError(SolverError::Kind::Launch,
                          std::string("no solver command configured (set ") + kSolverEnv + " or --solver)");
    }
    static std::atomic<unsigned> counter{0};
    const auto dir = options.workdir.empty() ? std::filesystem::temp_directory_path() : options.workdir;
    const std::string stem =
        "riskrjt_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1));
    const auto lp_path = dir / (stem + ".lp");
    const auto sol_path = dir / (stem + ".sol");
    {
        std::ofstream out(lp_path);
        if (!out) throw SolverError(SolverError::Kind::Launch, "cannot write " + lp_path.string());
        out << export_lp(model);
    }
    const bool uses_sol = options.command.find("{sol}") != std::string::npos;
    std::string cmd = replace_all(options.command, "{lp}", shell_quote(lp_path.string()));
    cmd = replace_all(cmd, "{sol}", shell_quote(sol_path.string()));

    std::string output;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw SolverError(SolverError::Kind::Launch, "cannot start: " + cmd);
    std::array<char, 4096> buf{};
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), got);
    const int status = ::pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    auto cleanup = [&] {
        if (options.keep_files) return;
        std::error_code ec;
        std::filesystem::remove(lp_path, ec);
        std::filesystem::remove(sol_path, ec);
    };
    if (code != 0) {
        cleanup();
        throw SolverError(SolverError::Kind::ExitCode,
                          "solver exited with code " + std::to_string(code) + ": " + cmd);
    }
    if (uses_sol) output = read_file(sol_path);
    cleanup();

    Solution sol = parse_solution(model, output, options.adapter, options.tolerance);
    sol.source = "external:" + options.command;
    return sol;
}

}  // namespace riskrjt
