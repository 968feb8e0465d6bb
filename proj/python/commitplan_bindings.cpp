#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
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

namespace py = pybind11;
using namespace commitplan;

namespace {

std::vector<std::string> names_of(const Task& task, const FluentSet& set) {
    std::vector<std::string> out;
    for (FluentId f : set) out.push_back(task.fluent_name(f));
    return out;
}

std::vector<std::string> names_of(const Task& task, const Plan& plan) {
    std::vector<std::string> out;
    for (ActionId a : plan.steps) out.push_back(task.actions.at(static_cast<std::size_t>(a)).name);
    return out;
}

Plan to_plan(const Task& task, const std::vector<std::string>& names) { return resolve_plan(task, names); }

Task build_task(const std::vector<std::string>& fluents, const std::vector<py::dict>& actions,
                const std::vector<std::string>& init, const std::vector<std::string>& goal) {
    TaskBuilder b;
    for (const auto& f : fluents) b.add_fluent(f);
    auto list = [](const py::dict& d, const char* key) {
        return d.contains(key) ? d[key].cast<std::vector<std::string>>() : std::vector<std::string>{};
    };
    for (const auto& a : actions) {
        Cost cost = a.contains("cost") ? a["cost"].cast<Cost>() : 1;
        b.add_action(a["name"].cast<std::string>(), list(a, "pre_pos"), list(a, "pre_neg"), list(a, "add"),
                   list(a, "del"), cost);
    }
    b.set_init(init);
    b.set_goal(goal);
    return b.build();
}

py::dict search_dict(const Task& task, const SearchResult& r) {
    py::dict d;
    d["outcome"] = to_string(r.outcome);
    d["limit"] = to_string(r.limit);
    d["cost"] = r.plan ? py::object(py::int_(r.cost)) : py::object(py::none());
    d["plan"] = r.plan ? py::object(py::cast(names_of(task, *r.plan))) : py::object(py::none());
    d["expansions"] = r.stats.expansions;
    d["generations"] = r.stats.generations;
    d["wall_time_s"] = r.stats.wall_time_s;
    return d;
}

SearchLimits make_limits(std::optional<double> time_limit, std::optional<std::size_t> max_states,
                         std::optional<std::size_t> max_expansions) {
    SearchLimits l;
    l.time_limit_s = time_limit ? time_limit : default_time_limit();
    l.max_states = max_states;
    l.max_expansions = max_expansions;
    return l;
}

OptimalHeuristic heuristic_from(const std::string& s) {
    if (s == "hmax") return OptimalHeuristic::h_max;
    if (s == "blind") return OptimalHeuristic::blind;
    throw InputError("unknown heuristic " + s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Commit compilation of STRIPS planning tasks";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<LimitExceededError>(m, "LimitExceededError", error.ptr());

    py::class_<Task>(m, "Task")
        .def_static("from_json", [](const std::string& text) { return read_json_task(text); })
        .def_static("from_pddl",
                    [](const std::string& domain, const std::string& problem) {
                        return ground(parse_pddl(domain, problem));
                    },
                    py::arg("domain"), py::arg("problem"))
        .def_static("build", &build_task, py::arg("fluents"), py::arg("actions"), py::arg("init"),
                    py::arg("goal"))
        .def("to_json", [](const Task& t) { return write_json_task(t); })
        .def("to_pddl",
             [](const Task& t) {
                 EmittedPddl e = emit_pddl(t);
                 return py::make_tuple(e.domain, e.problem);
             })
        .def_property_readonly("fluents",
                               [](const Task& t) {
                                   std::vector<std::string> out;
                                   for (const auto& f : t.fluents) out.push_back(f.name);
                                   return out;
                               })
        .def_property_readonly("actions",
                               [](const Task& t) {
                                   std::vector<std::string> out;
                                   for (const auto& a : t.actions) out.push_back(a.name);
                                   return out;
                               })
        .def_property_readonly("init", [](const Task& t) { return names_of(t, t.init.fluents()); })
        .def_property_readonly("goal", [](const Task& t) { return names_of(t, t.goal); })
        .def("__eq__", [](const Task& a, const Task& b) { return a == b; })
        .def("__repr__", [](const Task& t) {
            return "<Task " + std::to_string(t.fluents.size()) + " fluents, " + std::to_string(t.actions.size()) +
                   " actions>";
        });

    py::class_<CompiledTask>(m, "CompiledTask")
        .def_static("from_json", [](const std::string& text) { return read_json_compiled(text); })
        .def("to_json", [](const CompiledTask& c) { return write_json_compiled(c); })
        .def_readonly("base", &CompiledTask::base)
        .def_readonly("task", &CompiledTask::task)
        .def_property_readonly("pending_goals", [](const CompiledTask& c) { return names_of(c.base, c.pending_goals); })
        .def("commit_fluent",
             [](const CompiledTask& c, const std::string& goal) {
                 auto g = c.base.find_fluent(goal);
                 FluentId f = g ? c.commit_map.commit(*g) : -1;
                 if (f < 0) throw InputError(goal + " is not a pending goal");
                 return c.task.fluent_name(f);
             })
        .def("variant",
             [](const CompiledTask& c, const std::string& action) {
                 auto a = c.task.find_action(action);
                 if (!a) throw InputError("unknown compiled action " + action);
                 return to_string(c.provenance.at(static_cast<std::size_t>(*a)).variant);
             });

    m.def("compile",
          [](const Task& t, unsigned max_exponent) {
              CompilationOptions o;
              o.max_subset_exponent = max_exponent;
              return compile(t, o);
          },
          py::arg("task"), py::arg("max_exponent") = CompilationOptions{}.max_subset_exponent);

    m.def("forecast_size", [](const Task& t) {
        SizeForecast f = forecast_size(t);
        return py::make_tuple(f.compiled_action_count, f.max_subset_exponent);
    });

    m.def("solve",
          [](const Task& t, const std::string& engine, const std::string& heuristic,
             std::optional<double> time_limit, std::optional<std::size_t> max_states,
             std::optional<std::size_t> max_expansions, const std::string& planner_cmd) {
              SearchLimits limits = make_limits(time_limit, max_states, max_expansions);
              SearchResult r;
              {
                  py::gil_scoped_release release;
                  switch (engine_from_string(engine)) {
                      case Engine::optimal: r = solve_optimal(t, limits, heuristic_from(heuristic)); break;
                      case Engine::greedy: r = solve_greedy(t, limits); break;
                      case Engine::external: {
                          ExternalPlannerConfig cfg;
                          cfg.command = planner_cmd;
                          r = external_solve(cfg, t, limits);
                          break;
                      }
                  }
              }
              return search_dict(t, r);
          },
          py::arg("task"), py::arg("engine") = "optimal", py::arg("heuristic") = "hmax",
          py::arg("time_limit") = py::none(), py::arg("max_states") = py::none(),
          py::arg("max_expansions") = py::none(), py::arg("planner_cmd") = "");

    m.def("validate_plan", [](const Task& t, const std::vector<std::string>& plan) {
        PlanValidation v = validate_plan(t, to_plan(t, plan));
        py::dict d;
        d["valid"] = v.valid;
        d["cost"] = v.cost;
        d["failure"] = to_string(v.failure);
        d["message"] = v.message;
        return d;
    });

    m.def("forward_map", [](const Task& t, const std::vector<std::string>& plan, const CompiledTask& c) {
        return names_of(c.task, forward_map(t, to_plan(t, plan), c).plan);
    });

    m.def("backward_map", [](const CompiledTask& c, const std::vector<std::string>& plan) {
        return names_of(c.base, backward_map(c, to_plan(c.task, plan)).plan);
    });

    m.def("permanent_achievers", [](const Task& t, const std::vector<std::string>& plan) {
        Plan p = to_plan(t, plan);
        AchievementReport report = permanent_achievers(t, p);
        py::dict out;
        for (const auto& g : report.goals) {
            py::dict entry;
            entry["achiever"] = g.achiever.initial ? py::object(py::none()) : py::object(py::int_(g.achiever.step));
            py::list transient;
            for (const auto& iv : g.transient) transient.append(py::make_tuple(iv.added_at, iv.deleted_at));
            entry["transient"] = transient;
            out[py::str(t.fluent_name(g.goal))] = entry;
        }
        return out;
    });

    m.def("generate",
          [](std::uint64_t seed, int max_fluents, int max_actions, int max_goals) {
              GenParams p;
              p.seed = seed;
              p.fluents.hi = max_fluents;
              p.actions.hi = max_actions;
              p.goal_size.hi = max_goals;
              if (auto problems = validate_params(p); !problems.empty()) throw InputError(problems.front());
              return generate(p);
          },
          py::arg("seed"), py::arg("max_fluents") = GenParams{}.fluents.hi,
          py::arg("max_actions") = GenParams{}.actions.hi, py::arg("max_goals") = GenParams{}.goal_size.hi);

    m.def("sat_score", &sat_score, py::arg("best_known"), py::arg("achieved"));
    m.def("agl_score", &agl_score, py::arg("runtime_s"), py::arg("horizon_s") = 900.0);

    m.def("run_benchmark",
          [](const std::filesystem::path& suite, const std::filesystem::path& csv, const std::string& engine,
             bool both_variants, std::optional<double> time_limit, std::size_t jobs) {
              PlannerSpec planner;
              planner.engine = engine_from_string(engine);
              BenchOptions options;
              options.both_variants = both_variants;
              options.jobs = jobs;
              run_benchmark(suite, planner, make_limits(time_limit, {}, {}), csv, options);
              return format_summary_table(summarize(read_bench_csv(csv)));
          },
          py::arg("suite"), py::arg("csv"), py::arg("engine") = "optimal", py::arg("both_variants") = true,
          py::arg("time_limit") = py::none(), py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
}
