#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "commitplan/errors.hpp"
#include "commitplan/search.hpp"
#include "commitplan/strips.hpp"

namespace commitplan {

// C*/C; 0 for unsolved. Throws InputError when best_known > achieved.
double sat_score(Cost best_known, std::optional<Cost> achieved);

// 1 - log(T)/log(horizon), clamped to [0, 1]; 0 for unsolved.
double agl_score(std::optional<double> runtime_s, double horizon_s = 900.0);

// Reads COMMITPLAN_TIME_LIMIT (seconds) if set and positive.
std::optional<double> default_time_limit();

// ---------------------------------------------------------------------------
// External planners
// ---------------------------------------------------------------------------

struct ExternalPlannerConfig {
    // Placeholders: {domain} {problem} {plan_out} {time_limit}. Run via /bin/sh -c.
    std::string command;
    std::vector<int> solved_exit_codes{0};
    std::vector<int> unsolvable_exit_codes;
    // Where the planner leaves its plan; may use {plan_out}.
    std::string plan_file = "{plan_out}";
    std::optional<std::filesystem::path> work_dir;
    bool keep_files = false;
};

std::vector<std::string> validate_config(const ExternalPlannerConfig& config);

class ExternalPlannerError : public Error {
public:
    enum class Kind { config, launch, exit_code, plan_file, validation, cost_mismatch };

    ExternalPlannerError(Kind kind, const std::string& msg) : Error(label(kind) + ": " + msg), kind_(kind) {}

    Kind kind() const { return kind_; }
    static std::string label(Kind kind);

private:
    Kind kind_;
};

// Emits grounded PDDL, runs the planner, and re-validates its plan against
// `task` before trusting it. A timeout yields Outcome::limit.
SearchResult external_solve(const ExternalPlannerConfig& config, const Task& task, const SearchLimits& limits);

// ---------------------------------------------------------------------------
// Benchmarks
// ---------------------------------------------------------------------------

enum class Engine { optimal, greedy, external };

std::string to_string(Engine e);
Engine engine_from_string(const std::string& s);

struct PlannerSpec {
    Engine engine = Engine::optimal;
    OptimalHeuristic heuristic = OptimalHeuristic::h_max;
    ExternalPlannerConfig external;
};

struct PhaseTimes {
    double parse = 0.0;
    double ground = 0.0;
    double compile = 0.0;
    double search = 0.0;

    double total() const { return parse + ground + compile + search; }
};

struct BenchRecord {
    std::string task_id;
    std::string domain;
    std::string variant;   // "original" or "compiled"
    std::string outcome;   // solved, unsolvable, limit, error
    std::optional<Cost> cost;
    PhaseTimes times;
    std::size_t expansions = 0;
    double sat = 0.0;
    double agl = 0.0;
    std::string error;
};

inline constexpr const char* kBenchCsvVersion = "# commitplan-bench/1";
inline constexpr const char* kBenchCsvHeader =
    "task,domain,variant,outcome,cost,parse_s,ground_s,compile_s,search_s,total_s,expansions,sat_score,"
    "agl_score,error";

std::string format_csv_row(const BenchRecord& r);
std::vector<BenchRecord> read_bench_csv(const std::filesystem::path& csv);

struct BenchTask {
    std::string id;
    std::string domain;
    std::filesystem::path task_file;    // JSON task or PDDL problem
    std::filesystem::path domain_file;  // empty for JSON tasks
};

// JSON tasks and PDDL problems (with domain.pddl, <p>-domain.pddl or
// domain_<p>.pddl next to them), sorted by id.
std::vector<BenchTask> discover_suite(const std::filesystem::path& suite_dir);

struct BenchOptions {
    bool both_variants = true;
    std::size_t jobs = 1;
    double agl_horizon_s = 900.0;
    // Seconds on a monotonic clock; injectable for reproducible CSVs.
    std::function<double()> clock;
    // Best-known cost sidecar; defaults to <csv>.best.json.
    std::optional<std::filesystem::path> sidecar;
    // Stop after this many newly run tasks (simulates an interrupted run).
    std::optional<std::size_t> max_new_tasks;
};

struct VariantSummary {
    std::size_t tasks = 0;
    std::size_t coverage = 0;
    double sat = 0.0;
    double agl = 0.0;
};

struct DomainSummary {
    std::string domain;
    VariantSummary original;
    VariantSummary compiled;
};

struct BenchSummary {
    std::vector<DomainSummary> domains;
    DomainSummary total;
    std::size_t tasks_run = 0;
    std::size_t tasks_skipped = 0;
};

// Appends one record per (task, variant) to `csv_out`, skipping tasks already
// recorded there. Per-task failures become rows; the batch never aborts.
BenchSummary run_benchmark(const std::filesystem::path& suite_dir, const PlannerSpec& planner,
                           const SearchLimits& limits, const std::filesystem::path& csv_out,
                           const BenchOptions& options = {});

// Per-domain and total aggregates, from the rows alone.
BenchSummary summarize(const std::vector<BenchRecord>& records);

// Coverage / SAT / AGL per domain and variant, best values marked with '*'.
std::string format_summary_table(const BenchSummary& summary);

}  // namespace commitplan
