// Command-line front end: compile, solve, map-plan, analyze, gen, bench.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commitplan/compiler.hpp"
#include "commitplan/errors.hpp"
#include "commitplan/harness.hpp"
#include "commitplan/json_io.hpp"
#include "commitplan/pddl.hpp"
#include "commitplan/plan_map.hpp"
#include "commitplan/search.hpp"
#include "commitplan/taskgen.hpp"

namespace fs = std::filesystem;
using namespace commitplan;

namespace {

enum Exit { kSuccess = 0, kUnsolvable = 1, kLimits = 2, kInputError = 3, kInternalError = 4 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_file(path, text);
    }
}

// Task input shared by several subcommands: a JSON task (plain or compiled)
// or a PDDL domain/problem pair.
struct TaskSource {
    std::string json;
    std::string domain;
    std::string problem;

    void add_options(CLI::App* app, const std::string& json_flag) {
        auto* j = app->add_option(json_flag, json, "JSON task (strips-task/1 or commit-task/1)");
        auto* d = app->add_option("--domain", domain, "PDDL domain file");
        auto* p = app->add_option("--problem", problem, "PDDL problem file");
        j->excludes(d)->excludes(p);
        d->needs(p);
        p->needs(d);
    }
};

struct LoadedTask {
    Task task;
    std::optional<CompiledTask> compiled;

    // The task a planner should run on.
    const Task& target() const { return compiled ? compiled->task : task; }
};

LoadedTask load(const TaskSource& src) {
    LoadedTask out;
    if (!src.json.empty()) {
        std::string text = read_file(src.json);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw InputError(src.json + ": " + e.what());
        }
        if (doc.is_object() && doc.value("format", "") == kCompiledFormat) {
            out.compiled = read_json_compiled(text);
            out.task = out.compiled->base;
        } else {
            out.task = read_json_task(text);
        }
        return out;
    }
    if (src.domain.empty()) throw InputError("no task given; use a JSON task or --domain/--problem");
    out.task = ground(parse_pddl(read_file(src.domain), read_file(src.problem)));
    return out;
}

// --- compile ---------------------------------------------------------------

struct CompileArgs {
    TaskSource source;
    std::string out;
    std::string out_format = "json";
    std::string sidecar;
    unsigned max_exponent = CompilationOptions{}.max_subset_exponent;
};

int run_compile(const CompileArgs& args) {
    LoadedTask in = load(args.source);
    CompilationOptions options;
    options.max_subset_exponent = args.max_exponent;
    CompiledTask compiled = compile(in.task, options);
    if (args.out_format == "json") {
        emit(args.out, write_json_compiled(compiled));
    } else {
        if (args.out.empty()) throw InputError("--out-format pddl needs --out DIR");
        EmittedPddl pddl = emit_pddl(compiled.task);
        write_file(fs::path(args.out) / "domain.pddl", pddl.domain);
        write_file(fs::path(args.out) / "problem.pddl", pddl.problem);
    }
    if (!args.sidecar.empty()) write_file(args.sidecar, write_json_compiled(compiled));
    std::cerr << "compiled " << in.task.actions.size() << " actions into " << compiled.task.actions.size()
              << ", " << compiled.pending_goals.size() << " commit fluents\n";
    return kSuccess;
}

// --- solve -----------------------------------------------------------------

struct ExternalArgs {
    std::string command;
    std::vector<int> solved_codes{0};
    std::vector<int> unsolvable_codes;
    std::string plan_file = "{plan_out}";
    std::string work_dir;
    bool keep_files = false;

    void add_options(CLI::App* app) {
        app->add_option("--planner-cmd", command,
                        "external planner command; placeholders {domain} {problem} {plan_out} {time_limit}");
        app->add_option("--solved-exit-codes", solved_codes, "exit codes meaning a plan was written")
            ->capture_default_str();
        app->add_option("--unsolvable-exit-codes", unsolvable_codes, "exit codes meaning unsolvable");
        app->add_option("--plan-file", plan_file, "plan file path pattern")->capture_default_str();
        app->add_option("--work-dir", work_dir, "directory for planner inputs and outputs");
        app->add_flag("--keep-files", keep_files, "keep the planner's work directory");
    }

    ExternalPlannerConfig config() const {
        ExternalPlannerConfig cfg;
        cfg.command = command;
        cfg.solved_exit_codes = solved_codes;
        cfg.unsolvable_exit_codes = unsolvable_codes;
        cfg.plan_file = plan_file;
        if (!work_dir.empty()) cfg.work_dir = work_dir;
        cfg.keep_files = keep_files;
        return cfg;
    }
};

struct LimitArgs {
    std::optional<double> time_limit;
    std::optional<std::size_t> max_states;
    std::optional<std::size_t> max_expansions;

    void add_options(CLI::App* app) {
        app->add_option("--time-limit", time_limit, "seconds (default: $COMMITPLAN_TIME_LIMIT)");
        app->add_option("--max-states", max_states, "stored state cap");
        app->add_option("--max-expansions", max_expansions, "expansion cap");
    }

    SearchLimits limits() const {
        SearchLimits out;
        out.time_limit_s = time_limit ? time_limit : default_time_limit();
        out.max_states = max_states;
        out.max_expansions = max_expansions;
        return out;
    }
};

const std::map<std::string, Engine> kEngines{
    {"optimal", Engine::optimal}, {"greedy", Engine::greedy}, {"external", Engine::external}};
const std::map<std::string, OptimalHeuristic> kHeuristics{
    {"blind", OptimalHeuristic::blind}, {"hmax", OptimalHeuristic::h_max}};

struct SolveArgs {
    TaskSource source;
    Engine engine = Engine::optimal;
    OptimalHeuristic heuristic = OptimalHeuristic::h_max;
    LimitArgs limits;
    ExternalArgs external;
    std::string plan_out;
    std::string out;
};

SearchResult solve_with(Engine engine, OptimalHeuristic heuristic, const ExternalArgs& external, const Task& task,
                        const SearchLimits& limits) {
    switch (engine) {
        case Engine::optimal: return solve_optimal(task, limits, heuristic);
        case Engine::greedy: return solve_greedy(task, limits);
        case Engine::external: return external_solve(external.config(), task, limits);
    }
    throw InternalError("unknown engine");
}

int exit_for(const SearchResult& r) {
    switch (r.outcome) {
        case Outcome::solved: return kSuccess;
        case Outcome::unsolvable: return kUnsolvable;
        case Outcome::limit: return kLimits;
    }
    return kInternalError;
}

int run_solve(const SolveArgs& args) {
    LoadedTask in = load(args.source);
    const Task& task = in.target();
    SearchResult result = solve_with(args.engine, args.heuristic, args.external, task, args.limits.limits());
    emit(args.out, write_json_search(task, result));
    if (result.plan && !args.plan_out.empty()) write_file(args.plan_out, write_plan_file(task, *result.plan));
    std::cerr << to_string(result.outcome);
    if (result.outcome == Outcome::solved) std::cerr << ", cost " << result.cost;
    if (result.outcome == Outcome::limit) std::cerr << " (" << to_string(result.limit) << ")";
    std::cerr << ", " << result.stats.expansions << " expansions\n";
    return exit_for(result);
}

// --- map-plan --------------------------------------------------------------

struct MapArgs {
    std::string direction = "forward";
    std::string task;
    std::string compiled;
    std::string plan;
    std::string out;
    std::string plan_out;
};

Plan read_plan(const Task& task, const std::string& path) {
    PlanFile file = parse_plan_file(read_file(path));
    NamingContext names = make_naming(task);
    Plan plan = resolve_plan(task, file.actions, &names);
    if (file.declared_cost) {
        Cost actual = plan_cost(task, plan);
        if (actual != *file.declared_cost)
            throw InputError(path + ": declared cost " + std::to_string(*file.declared_cost) + " but actions cost " +
                             std::to_string(actual));
    }
    return plan;
}

int run_map(const MapArgs& args) {
    CompiledTask compiled = read_json_compiled(read_file(args.compiled));
    if (args.direction == "forward") {
        Task base = args.task.empty() ? compiled.base : read_json_task(read_file(args.task));
        if (!(base == compiled.base)) throw InputError("--task does not match the compiled task's base");
        Plan plan = read_plan(base, args.plan);
        MappingResult m = forward_map(base, plan, compiled);
        emit(args.out, write_json_mapping(base, compiled.task, m, "forward"));
        if (!args.plan_out.empty()) write_file(args.plan_out, write_plan_file(compiled.task, m.plan));
    } else {
        Plan plan = read_plan(compiled.task, args.plan);
        MappingResult m = backward_map(compiled, plan);
        emit(args.out, write_json_mapping(compiled.task, compiled.base, m, "backward"));
        if (!args.plan_out.empty()) write_file(args.plan_out, write_plan_file(compiled.base, m.plan));
    }
    return kSuccess;
}

// --- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
    TaskSource source;
    std::string plan;
    std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
    LoadedTask in = load(args.source);
    if (!args.plan.empty()) {
        // Plans for a compiled task are attributed on the base task.
        Plan plan = read_plan(in.target(), args.plan);
        if (in.compiled) plan = backward_map(*in.compiled, plan).plan;
        PlanValidation v = validate_plan(in.task, plan);
        if (!v.valid) throw InputError("plan is not valid: " + v.message);
        emit(args.out, write_json_achievements(in.task, plan, permanent_achievers(in.task, plan)));
        return kSuccess;
    }

    const Task& t = in.task;
    FluentSet pending = pending_goals(t);
    std::map<std::string, std::size_t> classes;
    for (GoalClass c : {GoalClass::add_only, GoalClass::del_only, GoalClass::add_and_del, GoalClass::neutral})
        classes[to_string(c)] = 0;
    for (const Action& a : t.actions) ++classes[to_string(classify_action(a, pending))];
    nlohmann::json names = nlohmann::json::array();
    for (FluentId g : pending) names.push_back(t.fluent_name(g));
    SizeForecast forecast = forecast_size(t);
    nlohmann::json doc = {
        {"fluents", t.fluents.size()},
        {"actions", t.actions.size()},
        {"goals", t.goal.size()},
        {"pending_goals", names},
        {"action_classes", classes},
        {"compiled_actions", forecast.compiled_action_count},
        {"max_subset_exponent", forecast.max_subset_exponent},
    };
    emit(args.out, doc.dump(2));
    return kSuccess;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
    GenParams params;
    std::size_t count = 1;
    std::string out_dir;
    std::string format = "json";
};

void add_range(CLI::App* app, const std::string& name, IntRange& range, const std::string& what) {
    app->add_option("--min-" + name, range.lo, "minimum " + what)->capture_default_str();
    app->add_option("--max-" + name, range.hi, "maximum " + what)->capture_default_str();
}

int run_gen(const GenArgs& args) {
    if (auto problems = validate_params(args.params); !problems.empty()) throw InputError(problems.front());
    if (args.out_dir.empty() && (args.count != 1 || args.format != "json"))
        throw InputError("--out-dir is required for --count > 1 or PDDL output");
    for (std::size_t i = 0; i < args.count; ++i) {
        GenParams p = args.params;
        p.seed = args.params.seed + i;
        Task t = generate(p);
        std::string stem = "task-" + std::to_string(p.seed);
        if (args.out_dir.empty()) {
            emit("", write_json_task(t));
        } else if (args.format == "json") {
            write_file(fs::path(args.out_dir) / (stem + ".json"), write_json_task(t));
        } else {
            EmittedPddl pddl = emit_pddl(t);
            write_file(fs::path(args.out_dir) / (stem + "-domain.pddl"), pddl.domain);
            write_file(fs::path(args.out_dir) / (stem + ".pddl"), pddl.problem);
        }
    }
    return kSuccess;
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string suite;
    std::string csv;
    Engine engine = Engine::optimal;
    OptimalHeuristic heuristic = OptimalHeuristic::h_max;
    bool both_variants = true;
    std::size_t jobs = 1;
    double horizon = 900.0;
    std::string sidecar;
    LimitArgs limits;
    ExternalArgs external;
};

int run_bench(const BenchArgs& args) {
    PlannerSpec planner;
    planner.engine = args.engine;
    planner.heuristic = args.heuristic;
    planner.external = args.external.config();
    if (planner.engine == Engine::external)
        if (auto problems = validate_config(planner.external); !problems.empty()) throw InputError(problems.front());
    BenchOptions options;
    options.both_variants = args.both_variants;
    options.jobs = args.jobs;
    options.agl_horizon_s = args.horizon;
    if (!args.sidecar.empty()) options.sidecar = args.sidecar;
    BenchSummary summary = run_benchmark(args.suite, planner, args.limits.limits(), args.csv, options);
    std::cout << format_summary_table(summarize(read_bench_csv(args.csv)));
    std::cerr << summary.tasks_run << " tasks run, " << summary.tasks_skipped << " already recorded\n";
    return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Commit compilation toolkit for STRIPS planning tasks"};
    app.require_subcommand(1);
    int code = kSuccess;

    CompileArgs compile_args;
    auto* compile_cmd = app.add_subcommand("compile", "compile a task into its commit task");
    compile_args.source.add_options(compile_cmd, "--in");
    compile_cmd->add_option("--out", compile_args.out, "output file (json) or directory (pddl)");
    compile_cmd->add_option("--out-format", compile_args.out_format, "json or pddl")
        ->check(CLI::IsMember({"json", "pddl"}))
        ->capture_default_str();
    compile_cmd->add_option("--sidecar", compile_args.sidecar, "also write the commit-task JSON here");
    compile_cmd->add_option("--max-exponent", compile_args.max_exponent, "cap on pending goals added per action")
        ->capture_default_str();
    compile_cmd->callback([&] { code = run_compile(compile_args); });

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "solve a task");
    solve_args.source.add_options(solve_cmd, "--task");
    solve_cmd->add_option("--engine", solve_args.engine, "optimal, greedy or external")
        ->transform(CLI::CheckedTransformer(kEngines, CLI::ignore_case));
    solve_cmd->add_option("--heuristic", solve_args.heuristic, "blind or hmax (optimal engine)")
        ->transform(CLI::CheckedTransformer(kHeuristics, CLI::ignore_case));
    solve_args.limits.add_options(solve_cmd);
    solve_args.external.add_options(solve_cmd);
    solve_cmd->add_option("--plan-out", solve_args.plan_out, "write the plan file here");
    solve_cmd->add_option("--out", solve_args.out, "search-result JSON (default stdout)");
    solve_cmd->callback([&] { code = run_solve(solve_args); });

    MapArgs map_args;
    auto* map_cmd = app.add_subcommand("map-plan", "map a plan between a task and its commit task");
    map_cmd->add_option("--direction", map_args.direction, "forward or backward")
        ->check(CLI::IsMember({"forward", "backward"}))
        ->capture_default_str();
    map_cmd->add_option("--task", map_args.task, "base JSON task (defaults to the one stored in --compiled)");
    map_cmd->add_option("--compiled", map_args.compiled, "commit-task JSON")->required();
    map_cmd->add_option("--plan", map_args.plan, "plan file to map")->required();
    map_cmd->add_option("--out", map_args.out, "plan-mapping JSON (default stdout)");
    map_cmd->add_option("--plan-out", map_args.plan_out, "write the mapped plan file here");
    map_cmd->callback([&] { code = run_map(map_args); });

    AnalyzeArgs analyze_args;
    auto* analyze_cmd = app.add_subcommand("analyze", "goal classes, size forecast, or achievers of a plan");
    analyze_args.source.add_options(analyze_cmd, "--task");
    analyze_cmd->add_option("--plan", analyze_args.plan, "report goal achievers of this plan");
    analyze_cmd->add_option("--out", analyze_args.out, "JSON report (default stdout)");
    analyze_cmd->callback([&] { code = run_analyze(analyze_args); });

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "generate random tasks");
    GenParams& gp = gen_args.params;
    gen_cmd->add_option("--seed", gp.seed, "seed of the first task")->capture_default_str();
    gen_cmd->add_option("--count", gen_args.count, "number of tasks, seeds counting up")->capture_default_str();
    add_range(gen_cmd, "fluents", gp.fluents, "fluent count");
    add_range(gen_cmd, "actions", gp.actions, "action count");
    add_range(gen_cmd, "goals", gp.goal_size, "goal count");
    add_range(gen_cmd, "cost", gp.cost, "action cost");
    gen_cmd->add_option("--max-pre", gp.max_pre, "positive preconditions per action")->capture_default_str();
    gen_cmd->add_option("--max-add", gp.max_add, "add effects per action")->capture_default_str();
    gen_cmd->add_option("--max-del", gp.max_del, "delete effects per action")->capture_default_str();
    gen_cmd->add_option("--neg-pre-prob", gp.negative_precondition_probability)->capture_default_str();
    gen_cmd->add_option("--goal-init-prob", gp.goal_initially_true_probability)->capture_default_str();
    gen_cmd->add_option("--init-prob", gp.init_true_probability)->capture_default_str();
    gen_cmd->add_option("--out-dir", gen_args.out_dir, "write task-<seed> files here instead of stdout");
    gen_cmd->add_option("--format", gen_args.format, "json or pddl")
        ->check(CLI::IsMember({"json", "pddl"}))
        ->capture_default_str();
    gen_cmd->callback([&] { code = run_gen(gen_args); });

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite on original and commit tasks");
    bench_cmd->add_option("--suite", bench_args.suite, "directory of JSON or PDDL tasks")->required();
    bench_cmd->add_option("--csv", bench_args.csv, "results CSV, appended and resumed")->required();
    bench_cmd->add_option("--engine", bench_args.engine, "optimal, greedy or external")
        ->transform(CLI::CheckedTransformer(kEngines, CLI::ignore_case));
    bench_cmd->add_option("--heuristic", bench_args.heuristic, "blind or hmax (optimal engine)")
        ->transform(CLI::CheckedTransformer(kHeuristics, CLI::ignore_case));
    bench_cmd->add_option("--both-variants", bench_args.both_variants, "also run the commit task")
        ->capture_default_str();
    bench_cmd->add_option("--jobs,-j", bench_args.jobs, "parallel tasks")->capture_default_str();
    bench_cmd->add_option("--horizon", bench_args.horizon, "AGL time horizon in seconds")->capture_default_str();
    bench_cmd->add_option("--sidecar", bench_args.sidecar, "best-known cost file (default <csv>.best.json)");
    bench_args.limits.add_options(bench_cmd);
    bench_args.external.add_options(bench_cmd);
    bench_cmd->callback([&] { code = run_bench(bench_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kSuccess : kInputError;
    } catch (const LimitExceededError& e) {
        std::cerr << "limit: " << e.what() << '\n';
        return kLimits;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const ExternalPlannerError& e) {
        std::cerr << "planner error: " << e.what() << '\n';
        return e.kind() == ExternalPlannerError::Kind::config ? kInputError : kInternalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternalError;
    }
    return code;
}
