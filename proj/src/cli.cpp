#include "riskrjt/cli.hpp"

#include "riskrjt/decode.hpp"
#include "riskrjt/diagram_io.hpp"
#include "riskrjt/external_solver.hpp"
#include "riskrjt/generators.hpp"
#include "riskrjt/junction_tree.hpp"
#include "riskrjt/lp_format.hpp"
#include "riskrjt/mip_builder.hpp"
#include "riskrjt/oracle.hpp"
#include "riskrjt/reference_solver.hpp"
#include "riskrjt/report.hpp"
#include "riskrjt/transform.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace riskrjt {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct Settings {
    std::string config_path;
    std::string solver;
    double tolerance = 1e-6;
    int threads = 0;
    Caps caps;
};

void load_config(Settings& s) {
    if (auto env = solver_command_from_env()) s.solver = *env;
    if (s.config_path.empty()) return;
    std::ifstream in(s.config_path);
    if (!in) throw Error("cannot open config file " + s.config_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
        if (j.contains("solver")) s.solver = j.at("solver").get<std::string>();
        if (j.contains("tolerance")) s.tolerance = j.at("tolerance").get<double>();
        if (j.contains("threads")) s.threads = j.at("threads").get<int>();
        if (j.contains("caps")) {
            const auto& c = j.at("caps");
            if (c.contains("joint_states")) s.caps.joint_states = c.at("joint_states").get<std::uint64_t>();
            if (c.contains("strategies")) s.caps.strategies = c.at("strategies").get<std::uint64_t>();
            if (c.contains("merged_states")) s.caps.merged_states = c.at("merged_states").get<std::uint64_t>();
            if (c.contains("cluster_states")) s.caps.cluster_states = c.at("cluster_states").get<std::uint64_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed config file " + s.config_path + ": " + e.what());
    }
}

struct PipelineArgs {
    std::string instance;
    std::string order;
    std::vector<std::string> modify;
    bool merge = false;
    bool indicators = false;
    std::string objective = "meu";
    std::vector<std::string> chance;
    std::vector<std::string> logical;
    std::vector<std::string> budget;
    std::vector<std::string> cvar_bound;
};

void add_instance_options(CLI::App* app, PipelineArgs& a) {
    app->add_option("instance", a.instance, "Diagram file, or pigfarm:N[:seed] / nmonitoring:N[:seed]")->required();
    app->add_option("--order", a.order, "Comma-separated topological order (default: declaration-stable)");
    app->add_option("--modify", a.modify, "Grow the tree so these nodes share a cluster (comma-separated)");
    app->add_flag("--merge-values", a.merge, "Merge all value nodes into one before building the tree");
}

void add_problem_options(CLI::App* app, PipelineArgs& a) {
    app->add_option("--objective", a.objective, "meu or cvar:<alpha>");
    app->add_option("--chance", a.chance, "P(<event>)<=p or >=p, optional @<cluster root>");
    app->add_option("--logical", a.logical, "Forbidden event, optional @<cluster root>");
    app->add_option("--budget", a.budget, "JSON file with {\"costs\": {node: {state: cost}}, \"limit\": x}");
    app->add_option("--cvar-bound", a.cvar_bound, "<alpha>:<threshold>, CVaR bounded below");
    app->add_flag("--indicators", a.indicators, "Emit decision coupling as indicator rows");
}

struct Pipeline {
    InfluenceDiagram d;
    std::optional<MergedValueMap> map;
    RootedJunctionTree t;
    std::vector<ModifyStep> trace;
    Problem problem;
};

template <class F>
auto as_usage(F&& f) {
    try {
        return f();
    } catch (const CapExceeded&) {
        throw;
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

Pipeline prepare(const PipelineArgs& a, const Settings& s, bool with_problem) {
    Pipeline p;
    p.d = load_instance(a.instance);
    if (auto v = validate_diagram(p.d); !v.empty()) {
        throw Error("invalid diagram: [" + v.front().rule + "] " + v.front().message);
    }
    if (a.merge) {
        MergeOptions mo;
        mo.state_cap = s.caps.merged_states;
        auto merged = merge_value_nodes(p.d, mo);
        p.d = std::move(merged.diagram);
        p.map = std::move(merged.map);
    }
    std::vector<NodeId> order =
        a.order.empty() ? topological_order(p.d) : as_usage([&] { return parse_node_list(p.d, a.order); });
    if (!is_topological_order(p.d, order)) throw UsageError("--order '" + a.order + "' is not a topological order");
    p.t = build_rjt(p.d, order);
    for (const auto& m : a.modify) {
        const auto targets = as_usage([&] { return parse_node_list(p.d, m); });
        p.t = modify_rjt(p.t, targets, &p.trace);
    }
    if (!with_problem) return p;

    as_usage([&] {
        p.problem.objective = parse_objective(a.objective);
        for (const auto& c : a.chance) p.problem.constraints.push_back(parse_chance(p.d, c));
        for (const auto& l : a.logical) p.problem.constraints.push_back(parse_logical(p.d, l));
        for (const auto& b : a.budget) {
            std::ifstream in(b);
            if (!in) throw UsageError("cannot open budget file " + b);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw UsageError("budget file " + b + " is not valid JSON: " + e.what());
            }
            p.problem.constraints.push_back(parse_budget(p.d, j));
        }
        for (const auto& c : a.cvar_bound) p.problem.constraints.push_back(parse_cvar_bound(c));
        return 0;
    });
    return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct BackendRun {
    Solution solution;
    std::optional<Decoded> decoded;
    std::optional<double> recheck;
    ModelStats stats;
    double seconds = 0.0;
};

BackendRun run_backend(const Pipeline& p, const std::string& backend, const Settings& s, bool indicators,
                       ExecutionPolicy policy) {
    const auto t0 = std::chrono::steady_clock::now();
    BuildOptions bo;
    bo.indicator_rows = indicators;
    bo.caps = s.caps;
    const MipModel model = build_model(p.problem, p.t, p.d, bo);
    BackendRun run;
    run.stats = model_stats(model);
    if (backend == "reference") {
        ReferenceOptions ro;
        ro.caps = s.caps;
        ro.policy = policy;
        ro.threads = s.threads;
        run.solution = solve_reference(model, p.t, p.d, ro);
    } else if (backend == "external") {
        ExternalOptions eo;
        eo.command = s.solver;
        eo.tolerance = s.tolerance;
        run.solution = solve_external(model, eo);
    } else {
        throw UsageError("unknown backend '" + backend + "' (expected reference or external)");
    }
    if (run.solution.status == SolveStatus::Optimal) {
        run.decoded = decode(run.solution, model, p.t, p.d);
        const auto eval = evaluate_problem(p.d, run.decoded->strategy, p.problem, s.caps);
        run.recheck = eval.feasible ? std::abs(eval.objective - run.solution.objective) : INFINITY;
    }
    run.seconds = seconds_since(t0);
    return run;
}

RunReport make_report(const std::string& instance, const Pipeline& p, const std::string& backend,
                      const BackendRun& run) {
    RunReport r;
    r.instance = instance;
    r.objective = describe(p.problem.objective);
    r.backend = backend;
    r.status = std::string(to_string(run.solution.status));
    r.objective_value = run.solution.objective;
    r.stats = run.stats;
    r.wall_seconds = run.seconds;
    r.recheck_gap = run.recheck;
    if (run.decoded) {
        r.set_strategy(p.d, run.decoded->strategy);
        r.set_distribution(run.decoded->distribution);
    }
    if (instance.starts_with("pigfarm:") && std::count(instance.begin(), instance.end(), ':') >= 2) {
        r.notes.push_back("random instance: uniform [0,0.3] noise per chance CPT entry, rows renormalized");
    }
    if (instance.starts_with("nmonitoring:")) {
        r.notes.push_back("n-monitoring tables: seeded monotone random recipe");
    }
    for (const auto& d : run.solution.diagnostics) r.notes.push_back(d);
    return r;
}

int cmd_validate(const std::string& file, std::ostream& out) {
    const InfluenceDiagram d = load_instance(file);
    const auto v = validate_diagram(d);
    for (const auto& x : v) out << "[" << x.rule << "] " << x.message << "\n";
    if (v.empty()) out << "ok: " << d.size() << " nodes\n";
    return v.empty() ? kExitOk : kExitCheckFailed;
}

int cmd_rjt(const PipelineArgs& a, const Settings& s, const std::string& dot, bool trace, std::ostream& out) {
    const Pipeline p = prepare(a, s, false);
    if (trace) {
        for (const auto& step : p.trace) out << "# " << step.label << "\n" << describe(step.tree, p.d);
        if (!p.trace.empty()) out << "# final\n";
    }
    out << describe(p.t, p.d);
    out << "width " << p.t.width() << "\n";
    if (!dot.empty()) {
        if (dot == "-") {
            out << to_dot(p.t, p.d);
        } else {
            std::ofstream f(dot);
            if (!f) throw Error("cannot write " + dot);
            f << to_dot(p.t, p.d);
        }
    }
    const auto v = validate_rjt(p.t, p.d);
    for (const auto& x : v) out << "[" << x.rule << "] " << x.message << "\n";
    return v.empty() ? kExitOk : kExitCheckFailed;
}

int cmd_build(const PipelineArgs& a, const Settings& s, const std::string& path, bool stats, std::ostream& out) {
    const Pipeline p = prepare(a, s, true);
    BuildOptions bo;
    bo.indicator_rows = a.indicators;
    bo.caps = s.caps;
    const MipModel model = build_model(p.problem, p.t, p.d, bo);
    const std::string lp = export_lp(model);
    if (path.empty() || path == "-") {
        out << lp;
    } else {
        std::ofstream f(path);
        if (!f) throw Error("cannot write " + path);
        f << lp;
    }
    if (stats) out << to_json(model_stats(model)).dump() << "\n";
    return kExitOk;
}

int cmd_solve(const PipelineArgs& a, const Settings& s, const std::string& backend, bool json, std::ostream& out) {
    const Pipeline p = prepare(a, s, true);
    const BackendRun run = run_backend(p, backend, s, a.indicators, ExecutionPolicy::Parallel);
    const RunReport r = make_report(a.instance, p, backend, run);
    if (json) {
        out << to_json(r).dump() << "\n";
    } else {
        out << "status " << r.status << "\n";
        if (run.decoded) {
            out << "objective " << format_number(r.objective_value) << "\n";
            out << "expected_utility " << format_number(r.expected_utility) << "\n";
            out << "strategy " << r.strategy.dump() << "\n";
        }
        for (const auto& n : run.solution.diagnostics) out << "diagnostic " << n << "\n";
    }
    const double tol = backend == "reference" ? 1e-9 : s.tolerance;
    const bool ok = run.solution.status == SolveStatus::Optimal && run.recheck && *run.recheck <= tol;
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_oracle(const PipelineArgs& a, const Settings& s, bool log, std::ostream& out) {
    const Pipeline p = prepare(a, s, true);
    OracleOptions oo;
    oo.caps = s.caps;
    oo.threads = s.threads;
    oo.keep_log = log;
    const OracleResult r = oracle_optimize(p.d, p.problem, oo);
    if (log) {
        for (const auto& e : r.log) {
            out << (e.feasible ? "feasible " : "infeasible ") << format_number(e.objective) << " "
                << strategy_to_json(p.d, e.strategy).dump() << "\n";
        }
    }
    out << "evaluated " << r.evaluated << "\n";
    if (!r.feasible) {
        out << "status infeasible\n";
        return kExitCheckFailed;
    }
    out << "status optimal\n";
    out << "objective " << format_number(r.objective) << "\n";
    out << "optimal_strategies " << r.argmax.size() << "\n";
    out << "strategy " << strategy_to_json(p.d, r.best).dump() << "\n";
    return kExitOk;
}

int cmd_compare(const PipelineArgs& a, const Settings& s, const std::vector<std::string>& backends, double tol,
                std::ostream& out) {
    const Pipeline p = prepare(a, s, true);
    OracleOptions oo;
    oo.caps = s.caps;
    oo.threads = s.threads;
    const OracleResult oracle = oracle_optimize(p.d, p.problem, oo);
    out << "oracle " << (oracle.feasible ? format_number(oracle.objective) : std::string("infeasible")) << "\n";
    bool agree = true;
    for (const auto& backend : backends) {
        std::string line = backend + " ";
        try {
            const BackendRun run = run_backend(p, backend, s, a.indicators, ExecutionPolicy::Parallel);
            const bool optimal = run.solution.status == SolveStatus::Optimal;
            if (!oracle.feasible) {
                const bool ok = run.solution.status == SolveStatus::Infeasible;
                agree = agree && ok;
                line += std::string(to_string(run.solution.status)) + (ok ? " agree" : " DISAGREE");
            } else if (!optimal) {
                agree = false;
                line += std::string(to_string(run.solution.status)) + " DISAGREE";
            } else {
                const double gap = std::abs(run.solution.objective - oracle.objective);
                const double recheck = run.recheck.value_or(INFINITY);
                const bool ok = gap <= tol && recheck <= tol;
                agree = agree && ok;
                std::ostringstream msg;
                msg << format_number(run.solution.objective) << " gap " << gap << " recheck " << recheck
                    << (ok ? " agree" : " DISAGREE");
                line += msg.str();
            }
        } catch (const Error& e) {
            agree = false;
            line += std::string("error ") + e.what() + " DISAGREE";
        }
        out << line << "\n";
    }
    out << (agree ? "result agree" : "result DISAGREE") << "\n";
    return agree ? kExitOk : kExitCheckFailed;
}

int cmd_bench(const std::string& family, int n, int trials, std::uint64_t seed, const PipelineArgs& base,
              const std::string& backend, bool table, const Settings& s, std::ostream& out) {
    if (family != "pigfarm" && family != "nmonitoring") {
        throw UsageError("unknown bench family '" + family + "' (expected pigfarm or nmonitoring)");
    }
    if (trials < 1) throw UsageError("--trials must be positive");
    std::vector<RunReport> reports(static_cast<std::size_t>(trials));
    std::vector<std::string> failures(static_cast<std::size_t>(trials));
    const double tol = backend == "reference" ? 1e-9 : s.tolerance;
    // Trials in parallel, each solved serially; reports land in their own slot.
    const auto gaps = sweep(
        static_cast<std::uint64_t>(trials), ExecutionPolicy::Parallel,
        [&]() -> ScoreFn {
            return [&](std::uint64_t k) {
                PipelineArgs a = base;
                a.instance = family + ":" + std::to_string(n) + ":" + std::to_string(seed + k);
                try {
                    const Pipeline p = prepare(a, s, true);
                    const BackendRun run = run_backend(p, backend, s, a.indicators, ExecutionPolicy::Serial);
                    reports[k] = make_report(a.instance, p, backend, run);
                    return run.recheck.value_or(INFINITY);
                } catch (const std::exception& e) {
                    reports[k].instance = a.instance;
                    reports[k].status = "error";
                    failures[k] = e.what();
                    return static_cast<double>(INFINITY);
                }
            };
        },
        s.threads);

    bool ok = true;
    double total_seconds = 0.0;
    double worst = 0.0;
    if (table) out << table_header() << "\n";
    for (std::size_t k = 0; k < reports.size(); ++k) {
        ok = ok && gaps[k] <= tol;
        worst = std::max(worst, gaps[k]);
        total_seconds += reports[k].wall_seconds;
        if (table) {
            out << table_row(reports[k]) << "\n";
        } else {
            auto j = to_json(reports[k]);
            if (!failures[k].empty()) j["error"] = failures[k];
            out << j.dump() << "\n";
        }
    }
    nlohmann::ordered_json agg{{"aggregate", family + ":" + std::to_string(n)},
                               {"trials", trials},
                               {"backend", backend},
                               {"mean_seconds", total_seconds / trials},
                               {"max_recheck_gap", std::isfinite(worst) ? nlohmann::json(worst) : nlohmann::json("inf")},
                               {"all_verified", ok}};
    out << agg.dump() << "\n";
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_gen(const std::string& family, int n, std::optional<std::uint64_t> seed, const std::string& path,
            std::ostream& out) {
    std::string ref = family + ":" + std::to_string(n);
    if (seed) ref += ":" + std::to_string(*seed);
    if (family != "pigfarm" && family != "nmonitoring") {
        throw UsageError("unknown family '" + family + "' (expected pigfarm or nmonitoring)");
    }
    const InfluenceDiagram d = load_instance(ref);
    if (path.empty() || path == "-") {
        out << write_diagram(d);
    } else {
        save_diagram(d, path);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Influence diagrams to rooted junction trees and mixed-integer models", "riskrjt"};
    app.require_subcommand(1);
    Settings settings;
    app.add_option("--config", settings.config_path, "JSON config: solver, tolerance, threads, caps");
    std::string solver_flag;
    int threads_flag = 0;

    auto* validate = app.add_subcommand("validate", "Check a diagram file");
    std::string validate_file;
    validate->add_option("instance", validate_file, "Diagram file or generator reference")->required();

    PipelineArgs rjt_args;
    std::string dot;
    bool trace = false;
    auto* rjt = app.add_subcommand("rjt", "Build (and optionally modify) the rooted junction tree");
    add_instance_options(rjt, rjt_args);
    rjt->add_option("--dot", dot, "Write a Graphviz rendering to this path ('-' for stdout)");
    rjt->add_flag("--trace", trace, "Print the tree after each modification step");

    PipelineArgs build_args;
    std::string lp_out;
    bool stats = false;
    auto* build = app.add_subcommand("build", "Write the optimization model in LP format");
    add_instance_options(build, build_args);
    add_problem_options(build, build_args);
    build->add_option("--out", lp_out, "LP output path ('-' for stdout)");
    build->add_flag("--stats", stats, "Print model statistics as JSON");

    PipelineArgs solve_args;
    std::string backend = "reference";
    bool json = false;
    auto* solve = app.add_subcommand("solve", "Solve the model and decode the strategy");
    add_instance_options(solve, solve_args);
    add_problem_options(solve, solve_args);
    solve->add_option("--backend", backend, "reference or external")->check(CLI::IsMember({"reference", "external"}));
    solve->add_option("--solver", solver_flag, "External solver command template ({lp}, {sol})");
    solve->add_flag("--json", json, "Print a JSON run report");

    PipelineArgs oracle_args;
    bool log = false;
    auto* oracle = app.add_subcommand("oracle", "Exhaustive optimization over all strategies");
    add_instance_options(oracle, oracle_args);
    add_problem_options(oracle, oracle_args);
    oracle->add_flag("--log", log, "Print every strategy with its value");

    PipelineArgs compare_args;
    std::vector<std::string> compare_backends{"reference"};
    double compare_tol = 1e-6;
    auto* compare = app.add_subcommand("compare", "Solve with model backends and the oracle; fail unless they agree");
    add_instance_options(compare, compare_args);
    add_problem_options(compare, compare_args);
    compare->add_option("--backend", compare_backends, "Backends to check (repeatable)")
        ->check(CLI::IsMember({"reference", "external"}));
    compare->add_option("--solver", solver_flag, "External solver command template ({lp}, {sol})");
    compare->add_option("--tolerance", compare_tol, "Agreement tolerance");

    PipelineArgs bench_args;
    std::string bench_family;
    int bench_n = 3;
    int bench_trials = 5;
    std::uint64_t bench_seed = 1;
    std::string bench_backend = "reference";
    bool bench_table = false;
    auto* bench = app.add_subcommand("bench", "Solve seeded random instances and re-verify each strategy");
    bench->add_option("family", bench_family, "pigfarm or nmonitoring")->required();
    bench->add_option("--n", bench_n, "Periods or monitors");
    bench->add_option("--trials", bench_trials, "Number of instances");
    bench->add_option("--seed", bench_seed, "Seed of the first instance");
    bench->add_option("--backend", bench_backend, "reference or external")
        ->check(CLI::IsMember({"reference", "external"}));
    bench->add_option("--solver", solver_flag, "External solver command template ({lp}, {sol})");
    bench->add_flag("--merge-values", bench_args.merge, "Merge value nodes");
    bench->add_flag("--table", bench_table, "Human-readable table instead of JSON lines");
    add_problem_options(bench, bench_args);

    std::string gen_family;
    int gen_n = 3;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Write a generated instance as a diagram file");
    gen->add_option("family", gen_family, "pigfarm or nmonitoring")->required();
    gen->add_option("--n", gen_n, "Periods or monitors");
    gen->add_option("--seed", gen_seed, "Randomization seed");
    gen->add_option("--out", gen_out, "Output path ('-' for stdout)");

    app.add_option("--threads", threads_flag, "Worker threads for the parallel sweeps (0: OpenMP default)");

    std::vector<const char*> argv{"riskrjt"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        load_config(settings);
        if (!solver_flag.empty()) settings.solver = solver_flag;
        if (threads_flag > 0) settings.threads = threads_flag;

        if (*validate) return cmd_validate(validate_file, out);
        if (*rjt) return cmd_rjt(rjt_args, settings, dot, trace, out);
        if (*build) return cmd_build(build_args, settings, lp_out, stats, out);
        if (*solve) return cmd_solve(solve_args, settings, backend, json, out);
        if (*oracle) return cmd_oracle(oracle_args, settings, log, out);
        if (*compare) return cmd_compare(compare_args, settings, compare_backends, compare_tol, out);
        if (*bench) {
            return cmd_bench(bench_family, bench_n, bench_trials, bench_seed, bench_args, bench_backend, bench_table,
                             settings, out);
        }
        if (*gen) return cmd_gen(gen_family, gen_n, gen_seed, gen_out, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}

}  // namespace riskrjt
