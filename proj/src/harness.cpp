#include "commitplan/harness.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "commitplan/compiler.hpp"
#include "commitplan/json_io.hpp"
#include "commitplan/pddl.hpp"

extern char** environ;

namespace commitplan {

namespace fs = std::filesystem;

double sat_score(Cost best_known, std::optional<Cost> achieved) {
    if (!achieved) return 0.0;
    if (best_known < 0 || *achieved < 0) throw InputError("negative plan cost");
    if (best_known > *achieved)
        throw InputError("best known cost " + std::to_string(best_known) + " exceeds achieved cost " +
                         std::to_string(*achieved));
    if (*achieved == 0) return 1.0;
    return static_cast<double>(best_known) / static_cast<double>(*achieved);
}

double agl_score(std::optional<double> runtime_s, double horizon_s) {
    if (!runtime_s) return 0.0;
    if (!(horizon_s > 1.0)) throw InputError("time horizon must exceed 1 second");
    if (*runtime_s <= 1.0) return 1.0;
    double v = 1.0 - std::log(*runtime_s) / std::log(horizon_s);
    return std::clamp(v, 0.0, 1.0);
}

std::optional<double> default_time_limit() {
    const char* raw = std::getenv("COMMITPLAN_TIME_LIMIT");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
        throw InputError(std::string("COMMITPLAN_TIME_LIMIT is not a positive number: ") + raw);
    return v;
}

// ---------------------------------------------------------------------------
// External planners
// ---------------------------------------------------------------------------

std::string ExternalPlannerError::label(Kind kind) {
    switch (kind) {
        case Kind::config: return "config-error";
        case Kind::launch: return "launch-failure";
        case Kind::exit_code: return "exit-code";
        case Kind::plan_file: return "plan-parse-failure";
        case Kind::validation: return "validation-failure";
        case Kind::cost_mismatch: return "cost-mismatch";
    }
    return "unknown";
}

std::vector<std::string> validate_config(const ExternalPlannerConfig& config) {
    std::vector<std::string> problems;
    if (config.command.empty()) problems.push_back("empty command");
    for (const char* ph : {"{domain}", "{problem}"})
        if (config.command.find(ph) == std::string::npos)
            problems.push_back(std::string("command lacks ") + ph);
    if (config.plan_file.empty()) problems.push_back("empty plan file pattern");
    for (int c : config.unsolvable_exit_codes)
        if (std::find(config.solved_exit_codes.begin(), config.solved_exit_codes.end(), c) !=
            config.solved_exit_codes.end())
            problems.push_back("exit code " + std::to_string(c) + " is both solved and unsolvable");
    return problems;
}

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

std::string substitute(std::string text, const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) {
        std::string ph = "{" + key + "}";
        for (auto pos = text.find(ph); pos != std::string::npos; pos = text.find(ph, pos + value.size()))
            text.replace(pos, ph.size(), value);
    }
    return text;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    out << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class TempDir {
public:
    TempDir(const std::optional<fs::path>& base, bool keep) : keep_(keep) {
        fs::path root = base ? *base : fs::temp_directory_path();
        fs::create_directories(root);
        std::string tmpl = (root / "commitplan-XXXXXX").string();
        if (!mkdtemp(tmpl.data()))
            throw ExternalPlannerError(ExternalPlannerError::Kind::launch, "cannot create work directory");
        path_ = tmpl;
    }
    ~TempDir() {
        if (keep_) return;
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
    bool keep_;
};

std::string format_seconds(double s) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(6) << s;
    return ss.str();
}

}  // namespace

SearchResult external_solve(const ExternalPlannerConfig& config, const Task& task, const SearchLimits& limits) {
    using Kind = ExternalPlannerError::Kind;
    if (auto problems = validate_config(config); !problems.empty())
        throw ExternalPlannerError(Kind::config, problems.front());

    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

    NamingContext names = make_naming(task);
    EmittedPddl pddl = emit_pddl(task, names);

    TempDir dir(config.work_dir, config.keep_files);
    fs::path domain = dir.path() / "domain.pddl";
    fs::path problem = dir.path() / "problem.pddl";
    fs::path plan_out = dir.path() / "plan";
    fs::path log = dir.path() / "planner.log";
    write_file(domain, pddl.domain);
    write_file(problem, pddl.problem);

    std::string limit_text = limits.time_limit_s ? format_seconds(*limits.time_limit_s) : "0";
    std::string command = substitute(config.command, {{"domain", shell_quote(domain.string())},
                                                      {"problem", shell_quote(problem.string())},
                                                      {"plan_out", shell_quote(plan_out.string())},
                                                      {"time_limit", limit_text}});
    fs::path plan_path = substitute(config.plan_file, {{"plan_out", plan_out.string()}});
    if (plan_path.is_relative()) plan_path = dir.path() / plan_path;

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);
    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);

    std::string workdir_cmd = "cd " + shell_quote(dir.path().string()) + " && " + command;
    const char* argv[] = {"/bin/sh", "-c", workdir_cmd.c_str(), nullptr};
    pid_t pid = 0;
    int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, const_cast<char**>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    if (rc != 0) throw ExternalPlannerError(Kind::launch, std::string("posix_spawn: ") + std::strerror(rc));

    SearchResult result;
    int status = 0;
    for (;;) {
        pid_t w = waitpid(pid, &status, WNOHANG);
        if (w == pid) break;
        if (w < 0) throw ExternalPlannerError(Kind::launch, std::string("waitpid: ") + std::strerror(errno));
        if (limits.time_limit_s && elapsed() > *limits.time_limit_s) {
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            result.outcome = Outcome::limit;
            result.limit = LimitKind::time;
            result.stats.wall_time_s = elapsed();
            return result;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    // Reap anything the planner left running in its group.
    kill(-pid, SIGKILL);
    result.stats.wall_time_s = elapsed();

    if (!WIFEXITED(status)) {
        int sig = WIFSIGNALED(status) ? WTERMSIG(status) : 0;
        throw ExternalPlannerError(Kind::exit_code, "planner terminated by signal " + std::to_string(sig));
    }
    int code = WEXITSTATUS(status);
    auto has = [](const std::vector<int>& v, int c) { return std::find(v.begin(), v.end(), c) != v.end(); };
    if (has(config.unsolvable_exit_codes, code)) {
        result.outcome = Outcome::unsolvable;
        return result;
    }
    if (!has(config.solved_exit_codes, code))
        throw ExternalPlannerError(Kind::exit_code, "planner exited with code " + std::to_string(code));

    if (!fs::exists(plan_path))
        throw ExternalPlannerError(Kind::plan_file, "no plan file at " + plan_path.string());
    PlanFile file;
    Plan plan;
    try {
        file = parse_plan_file(read_file(plan_path));
        plan = resolve_plan(task, file.actions, &names);
    } catch (const InputError& e) {
        throw ExternalPlannerError(Kind::plan_file, e.what());
    }
    PlanValidation v = validate_plan(task, plan);
    if (!v.valid) throw ExternalPlannerError(Kind::validation, v.message);
    if (file.declared_cost && *file.declared_cost != v.cost)
        throw ExternalPlannerError(Kind::cost_mismatch, "declared " + std::to_string(*file.declared_cost) +
                                                            ", recomputed " + std::to_string(v.cost));
    result.outcome = Outcome::solved;
    result.plan = std::move(plan);
    result.cost = v.cost;
    return result;
}

// ---------------------------------------------------------------------------
// Benchmarks
// ---------------------------------------------------------------------------

std::string to_string(Engine e) {
    switch (e) {
        case Engine::optimal: return "optimal";
        case Engine::greedy: return "greedy";
        case Engine::external: return "external";
    }
    return "unknown";
}

Engine engine_from_string(const std::string& s) {
    if (s == "optimal") return Engine::optimal;
    if (s == "greedy") return Engine::greedy;
    if (s == "external") return Engine::external;
    throw InputError("unknown engine: " + s);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '\n' || c == '\r') out += ' ';
        else out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string fixed(double v, int digits) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

}  // namespace

std::string format_csv_row(const BenchRecord& r) {
    std::ostringstream ss;
    ss << csv_field(r.task_id) << ',' << csv_field(r.domain) << ',' << r.variant << ',' << r.outcome << ','
       << (r.cost ? std::to_string(*r.cost) : std::string()) << ',' << fixed(r.times.parse, 6) << ','
       << fixed(r.times.ground, 6) << ',' << fixed(r.times.compile, 6) << ',' << fixed(r.times.search, 6) << ','
       << fixed(r.times.total(), 6) << ',' << r.expansions << ',' << fixed(r.sat, 6) << ',' << fixed(r.agl, 6)
       << ',' << csv_field(r.error);
    return ss.str();
}

std::vector<BenchRecord> read_bench_csv(const fs::path& csv) {
    std::ifstream in(csv);
    if (!in) throw InputError("cannot read " + csv.string());
    std::vector<BenchRecord> out;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kBenchCsvHeader) throw InputError(csv.string() + ": unexpected CSV header");
            header = true;
            continue;
        }
        auto f = split_csv_line(line);
        if (f.size() != 14) throw InputError(csv.string() + ":" + std::to_string(lineno) + ": expected 14 fields");
        try {
            BenchRecord r;
            r.task_id = f[0];
            r.domain = f[1];
            r.variant = f[2];
            r.outcome = f[3];
            if (!f[4].empty()) r.cost = std::stoll(f[4]);
            r.times.parse = std::stod(f[5]);
            r.times.ground = std::stod(f[6]);
            r.times.compile = std::stod(f[7]);
            r.times.search = std::stod(f[8]);
            r.expansions = std::stoull(f[10]);
            r.sat = std::stod(f[11]);
            r.agl = std::stod(f[12]);
            r.error = f[13];
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw InputError(csv.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

std::vector<BenchTask> discover_suite(const fs::path& suite_dir) {
    if (!fs::is_directory(suite_dir)) throw InputError("suite directory not found: " + suite_dir.string());
    std::vector<BenchTask> tasks;
    for (const auto& entry : fs::recursive_directory_iterator(suite_dir)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        std::string stem = p.stem().string();
        std::string ext = p.extension().string();
        fs::path rel = fs::relative(p, suite_dir);
        std::string domain = rel.has_parent_path() ? rel.parent_path().generic_string() : std::string(".");
        if (ext == ".json") {
            if (stem.ends_with(".best") || stem.starts_with("_")) continue;
            tasks.push_back({rel.generic_string(), domain, p, {}});
        } else if (ext == ".pddl") {
            if (stem.find("domain") != std::string::npos) continue;
            fs::path dir = p.parent_path();
            fs::path dom;
            for (const fs::path& cand : {dir / (stem + "-domain.pddl"), dir / ("domain_" + stem + ".pddl"),
                                         dir / "domain.pddl"})
                if (fs::exists(cand)) {
                    dom = cand;
                    break;
                }
            if (dom.empty()) throw InputError("no domain file for " + p.string());
            tasks.push_back({rel.generic_string(), domain, p, dom});
        }
    }
    std::sort(tasks.begin(), tasks.end(), [](const BenchTask& a, const BenchTask& b) { return a.id < b.id; });
    return tasks;
}

namespace {

using Clock = std::function<double()>;

SearchResult run_engine(const PlannerSpec& planner, const Task& task, const SearchLimits& limits) {
    switch (planner.engine) {
        case Engine::optimal: return solve_optimal(task, limits, planner.heuristic);
        case Engine::greedy: return solve_greedy(task, limits);
        case Engine::external: return external_solve(planner.external, task, limits);
    }
    throw InternalError("unknown engine");
}

void fill_from_search(BenchRecord& r, const SearchResult& res) {
    r.outcome = to_string(res.outcome);
    r.expansions = res.stats.expansions;
    if (res.outcome == Outcome::solved) r.cost = res.cost;
    if (res.outcome == Outcome::limit) r.error = to_string(res.limit);
}

// Runs one task in both variants; scores are filled in later.
std::vector<BenchRecord> run_task(const BenchTask& bt, const PlannerSpec& planner, const SearchLimits& limits,
                                  bool both_variants, const Clock& clock) {
    BenchRecord orig;
    orig.task_id = bt.id;
    orig.domain = bt.domain;
    orig.variant = "original";
    BenchRecord comp = orig;
    comp.variant = "compiled";

    auto fail_all = [&](const std::string& msg) {
        orig.outcome = comp.outcome = "error";
        orig.error = comp.error = msg;
    };

    Task task;
    double t0 = clock();
    try {
        if (bt.domain_file.empty()) {
            task = read_json_task(read_file(bt.task_file));
            orig.times.parse = clock() - t0;
        } else {
            LiftedModel model = parse_pddl(read_file(bt.domain_file), read_file(bt.task_file));
            double t1 = clock();
            orig.times.parse = t1 - t0;
            task = ground(model);
            orig.times.ground = clock() - t1;
        }
        comp.times.parse = orig.times.parse;
        comp.times.ground = orig.times.ground;
    } catch (const Error& e) {
        fail_all(e.what());
        std::vector<BenchRecord> out{orig};
        if (both_variants) out.push_back(comp);
        return out;
    }

    try {
        double s = clock();
        SearchResult res = run_engine(planner, task, limits);
        orig.times.search = clock() - s;
        fill_from_search(orig, res);
        if (res.plan && !validate_plan(task, *res.plan).valid)
            throw InternalError("engine returned an invalid plan");
    } catch (const Error& e) {
        orig.outcome = "error";
        orig.error = e.what();
    }

    if (both_variants) {
        try {
            double c = clock();
            CompiledTask compiled = compile(task);
            double s = clock();
            comp.times.compile = s - c;
            SearchResult res = run_engine(planner, compiled.task, limits);
            comp.times.search = clock() - s;
            fill_from_search(comp, res);
            if (res.plan) {
                // The cost that counts is that of the base plan it maps back to.
                MappingResult back = backward_map(compiled, *res.plan);
                if (back.cost != res.cost) throw InternalError("compiled plan cost differs from mapped cost");
            }
        } catch (const Error& e) {
            comp.outcome = "error";
            comp.error = e.what();
        }
    }
    std::vector<BenchRecord> out{orig};
    if (both_variants) out.push_back(comp);
    return out;
}

std::map<std::string, Cost> read_sidecar(const fs::path& p) {
    std::map<std::string, Cost> best;
    if (!fs::exists(p)) return best;
    try {
        auto j = nlohmann::json::parse(read_file(p));
        for (const auto& [k, v] : j.at("best_known").items()) best[k] = v.get<Cost>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(p.string() + ": " + e.what());
    }
    return best;
}

void write_sidecar(const fs::path& p, const std::map<std::string, Cost>& best) {
    nlohmann::ordered_json j;
    j["format"] = "commitplan-best/1";
    j["best_known"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : best) j["best_known"][k] = v;
    fs::path tmp = p;
    tmp += ".tmp";
    write_file(tmp, j.dump(2) + "\n");
    fs::rename(tmp, p);
}

void score(std::vector<BenchRecord>& rows, std::map<std::string, Cost>& best, double horizon) {
    if (rows.empty()) return;
    const std::string& id = rows.front().task_id;
    std::optional<Cost> c_star;
    if (auto it = best.find(id); it != best.end()) c_star = it->second;
    for (const auto& r : rows)
        if (r.cost && (!c_star || *r.cost < *c_star)) c_star = *r.cost;
    if (c_star) best[id] = *c_star;
    for (auto& r : rows) {
        bool solved = r.outcome == "solved";
        r.sat = solved ? sat_score(*c_star, r.cost) : 0.0;
        r.agl = solved ? agl_score(r.times.total(), horizon) : 0.0;
    }
}

// Drops a torn trailing line and rows of tasks without a complete row set.
// Returns the ids of complete tasks.
std::set<std::string> prepare_csv(const fs::path& csv, bool both_variants) {
    std::set<std::string> done;
    if (!fs::exists(csv) || fs::file_size(csv) == 0) {
        write_file(csv, std::string(kBenchCsvVersion) + "\n" + kBenchCsvHeader + "\n");
        return done;
    }
    std::string text = read_file(csv);
    if (!text.empty() && text.back() != '\n') text.erase(text.find_last_of('\n') == std::string::npos
                                                             ? 0
                                                             : text.find_last_of('\n') + 1);
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> preamble;
    std::vector<std::pair<std::string, std::string>> rows;  // task id, line
    bool header = false;
    while (std::getline(in, line)) {
        if (!header) {
            preamble.push_back(line);
            if (line == kBenchCsvHeader) header = true;
            else if (!line.empty() && line[0] != '#') throw InputError(csv.string() + ": unexpected CSV header");
            continue;
        }
        auto f = split_csv_line(line);
        if (f.size() != 14) continue;
        rows.emplace_back(f[0], line);
    }
    if (!header) preamble = {kBenchCsvVersion, kBenchCsvHeader};

    std::map<std::string, std::size_t> count;
    for (const auto& [id, _] : rows) ++count[id];
    std::size_t need = both_variants ? 2 : 1;
    std::string out;
    for (const auto& l : preamble) out += l + "\n";
    for (const auto& [id, l] : rows)
        if (count[id] == need) {
            out += l + "\n";
            done.insert(id);
        }
    if (out != read_file(csv)) write_file(csv, out);
    return done;
}

VariantSummary& pick(DomainSummary& d, const std::string& variant) {
    return variant == "compiled" ? d.compiled : d.original;
}

}  // namespace

BenchSummary run_benchmark(const fs::path& suite_dir, const PlannerSpec& planner, const SearchLimits& limits,
                           const fs::path& csv_out, const BenchOptions& options) {
    if (planner.engine == Engine::external)
        if (auto problems = validate_config(planner.external); !problems.empty())
            throw InputError("external planner: " + problems.front());
    Clock clock = options.clock;
    if (!clock) {
        auto origin = std::chrono::steady_clock::now();
        clock = [origin] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin).count(); };
    }
    fs::path sidecar = options.sidecar ? *options.sidecar : fs::path(csv_out.string() + ".best.json");

    std::vector<BenchTask> all = discover_suite(suite_dir);
    std::set<std::string> done = prepare_csv(csv_out, options.both_variants);
    std::map<std::string, Cost> best = read_sidecar(sidecar);

    std::vector<BenchTask> todo;
    for (const auto& t : all)
        if (!done.count(t.id)) todo.push_back(t);
    if (options.max_new_tasks && todo.size() > *options.max_new_tasks) todo.resize(*options.max_new_tasks);

    BenchSummary summary;
    summary.tasks_skipped = all.size() - todo.size();
    summary.tasks_run = todo.size();

    std::ofstream out(csv_out, std::ios::app | std::ios::binary);
    if (!out) throw InputError("cannot append to " + csv_out.string());

    auto commit_rows = [&](std::vector<BenchRecord>& rows) {
        score(rows, best, options.agl_horizon_s);
        std::string block;
        for (const auto& r : rows) block += format_csv_row(r) + "\n";
        out << block;  // all rows of a task in one write
        out.flush();
        write_sidecar(sidecar, best);
    };

    std::size_t jobs = std::max<std::size_t>(1, options.jobs);
    if (jobs == 1 || todo.size() <= 1) {
        for (const auto& t : todo) {
            auto rows = run_task(t, planner, limits, options.both_variants, clock);
            commit_rows(rows);
        }
    } else {
        std::vector<std::optional<std::vector<BenchRecord>>> results(todo.size());
        std::mutex mu;
        std::condition_variable cv;
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < todo.size(); i = next++) {
                auto rows = run_task(todo[i], planner, limits, options.both_variants, clock);
                std::lock_guard lock(mu);
                results[i] = std::move(rows);
                cv.notify_all();
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < std::min(jobs, todo.size()); ++k) pool.emplace_back(worker);
        for (std::size_t i = 0; i < todo.size(); ++i) {
            std::vector<BenchRecord> rows;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return results[i].has_value(); });
                rows = std::move(*results[i]);
            }
            commit_rows(rows);
        }
        for (auto& th : pool) th.join();
    }
    out.close();

    BenchSummary full = summarize(read_bench_csv(csv_out));
    full.tasks_run = summary.tasks_run;
    full.tasks_skipped = summary.tasks_skipped;
    return full;
}

BenchSummary summarize(const std::vector<BenchRecord>& records) {
    std::map<std::string, DomainSummary> by_domain;
    BenchSummary s;
    s.total.domain = "total";
    for (const auto& r : records) {
        DomainSummary& d = by_domain[r.domain];
        d.domain = r.domain;
        bool solved = r.outcome == "solved";
        for (VariantSummary* v : {&pick(d, r.variant), &pick(s.total, r.variant)}) {
            ++v->tasks;
            if (solved) ++v->coverage;
            v->sat += r.sat;
            v->agl += r.agl;
        }
    }
    for (auto& [_, d] : by_domain) s.domains.push_back(d);
    return s;
}

std::string format_summary_table(const BenchSummary& summary) {
    auto cell = [](double a, double b, bool is_count) {
        std::string text = is_count ? std::to_string(static_cast<long long>(a)) : fixed(a, 1);
        double ra = std::round(a * 10.0), rb = std::round(b * 10.0);
        if (ra >= rb) text += "*";
        return text;
    };
    std::ostringstream ss;
    ss << std::left << std::setw(24) << "domain" << std::right << std::setw(8) << "tasks" << std::setw(10)
       << "cov-orig" << std::setw(10) << "cov-comp" << std::setw(10) << "sat-orig" << std::setw(10) << "sat-comp"
       << std::setw(10) << "agl-orig" << std::setw(10) << "agl-comp" << "\n";
    auto row = [&](const DomainSummary& d) {
        const auto& o = d.original;
        const auto& c = d.compiled;
        ss << std::left << std::setw(24) << d.domain << std::right << std::setw(8) << std::max(o.tasks, c.tasks)
           << std::setw(10) << cell(o.coverage, c.coverage, true) << std::setw(10)
           << cell(c.coverage, o.coverage, true) << std::setw(10) << cell(o.sat, c.sat, false) << std::setw(10)
           << cell(c.sat, o.sat, false) << std::setw(10) << cell(o.agl, c.agl, false) << std::setw(10)
           << cell(c.agl, o.agl, false) << "\n";
    };
    for (const auto& d : summary.domains) row(d);
    row(summary.total);
    return ss.str();
}

}  // namespace commitplan
