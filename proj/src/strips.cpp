#include "commitplan/strips.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "commitplan/errors.hpp"

namespace commitplan {

void normalize(FluentSet& set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
}

bool contains(const FluentSet& set, FluentId id) {
    return std::binary_search(set.begin(), set.end(), id);
}

FluentSet set_intersection(const FluentSet& a, const FluentSet& b) {
    FluentSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

FluentSet set_union(const FluentSet& a, const FluentSet& b) {
    FluentSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

State::State(std::size_t num_fluents)
    : size_(num_fluents), words_((num_fluents + 63) / 64, 0) {}

State::State(std::size_t num_fluents, std::span<const FluentId> true_fluents)
    : State(num_fluents) {
    for (FluentId f : true_fluents) {
        set(f);
    }
}

FluentSet State::fluents() const {
    FluentSet out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t word = words_[w];
        while (word != 0) {
            int bit_index = std::countr_zero(word);
            out.push_back(static_cast<FluentId>(w * 64 + static_cast<std::size_t>(bit_index)));
            word &= word - 1;
        }
    }
    return out;
}

std::size_t State::count() const {
    std::size_t n = 0;
    for (auto w : words_) {
        n += static_cast<std::size_t>(std::popcount(w));
    }
    return n;
}

std::size_t State::hash() const {
    // FNV-1a over the words, then a final mix.
    std::uint64_t h = 1469598103934665603ULL ^ size_;
    for (auto w : words_) {
        h ^= w;
        h *= 1099511628211ULL;
        h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
}

std::optional<FluentId> Task::find_fluent(std::string_view name) const {
    for (const auto& f : fluents) {
        if (f.name == name) {
            return f.id;
        }
    }
    return std::nullopt;
}

std::optional<ActionId> Task::find_action(std::string_view name) const {
    for (const auto& a : actions) {
        if (a.name == name) {
            return a.id;
        }
    }
    return std::nullopt;
}

bool Task::is_goal(const State& s) const {
    return std::all_of(goal.begin(), goal.end(), [&](FluentId g) { return s.test(g); });
}

FluentId TaskBuilder::add_fluent(const std::string& name) {
    if (auto it = by_name_.find(name); it != by_name_.end()) {
        return it->second;
    }
    auto id = static_cast<FluentId>(fluents_.size());
    fluents_.push_back({id, name});
    by_name_.emplace(name, id);
    return id;
}

FluentId TaskBuilder::fluent(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) {
        throw InputError("unknown fluent " + name);
    }
    return it->second;
}

FluentSet TaskBuilder::ids(const std::vector<std::string>& names) const {
    FluentSet out;
    out.reserve(names.size());
    for (const auto& n : names) {
        out.push_back(fluent(n));
    }
    normalize(out);
    return out;
}

ActionId TaskBuilder::add_action(const std::string& name,
                                 const std::vector<std::string>& pre_pos,
                                 const std::vector<std::string>& pre_neg,
                                 const std::vector<std::string>& add,
                                 const std::vector<std::string>& del,
                                 Cost cost) {
    Action a;
    a.id = static_cast<ActionId>(actions_.size());
    a.name = name;
    a.pre_pos = ids(pre_pos);
    a.pre_neg = ids(pre_neg);
    a.add = ids(add);
    a.del = ids(del);
    a.cost = cost;
    actions_.push_back(std::move(a));
    return actions_.back().id;
}

void TaskBuilder::set_init(const std::vector<std::string>& names) { init_ = ids(names); }

void TaskBuilder::set_goal(const std::vector<std::string>& names) { goal_ = ids(names); }

Task TaskBuilder::build() const {
    Task t;
    t.fluents = fluents_;
    t.actions = actions_;
    t.init = State(fluents_.size(), init_);
    t.goal = goal_;
    return t;
}

Cost plan_cost(const Task& task, const Plan& plan) {
    Cost total = 0;
    for (ActionId id : plan.steps) {
        total += task.actions.at(static_cast<std::size_t>(id)).cost;
    }
    return total;
}

namespace {

bool in_range(const Task& task, FluentId id) {
    return id >= 0 && static_cast<std::size_t>(id) < task.num_fluents();
}

bool sorted_unique(const FluentSet& s) {
    return std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) == s.end();
}

}  // namespace

std::vector<std::string> validate_task(const Task& task) {
    std::vector<std::string> report;
    std::unordered_map<std::string, std::size_t> seen;

    for (std::size_t i = 0; i < task.fluents.size(); ++i) {
        const auto& f = task.fluents[i];
        if (f.id != static_cast<FluentId>(i)) {
            report.push_back("fluent " + f.name + " has id " + std::to_string(f.id) +
                             ", expected " + std::to_string(i));
        }
        if (f.name.empty()) {
            report.push_back("fluent " + std::to_string(i) + " has an empty name");
        }
        if (!seen.emplace(f.name, i).second) {
            report.push_back("duplicate fluent name " + f.name);
        }
    }

    auto name_of = [&](FluentId id) {
        return in_range(task, id) ? task.fluent_name(id) : "#" + std::to_string(id);
    };

    seen.clear();
    for (std::size_t i = 0; i < task.actions.size(); ++i) {
        const auto& a = task.actions[i];
        if (a.id != static_cast<ActionId>(i)) {
            report.push_back("action " + a.name + " has id " + std::to_string(a.id) +
                             ", expected " + std::to_string(i));
        }
        if (!seen.emplace(a.name, i).second) {
            report.push_back("duplicate action name " + a.name);
        }
        if (a.cost < 0) {
            report.push_back("action " + a.name + " has negative cost");
        }
        const std::pair<const char*, const FluentSet*> parts[] = {
            {"pre_pos", &a.pre_pos}, {"pre_neg", &a.pre_neg}, {"add", &a.add}, {"del", &a.del}};
        bool ranges_ok = true;
        for (const auto& [label, set] : parts) {
            if (!sorted_unique(*set)) {
                report.push_back("action " + a.name + ": " + label + " is not sorted and duplicate-free");
            }
            for (FluentId f : *set) {
                if (!in_range(task, f)) {
                    report.push_back("action " + a.name + ": " + label + " fluent " +
                                     std::to_string(f) + " out of range");
                    ranges_ok = false;
                }
            }
        }
        if (!ranges_ok) {
            continue;
        }
        for (FluentId f : set_intersection(a.add, a.del)) {
            report.push_back("action " + a.name + ": add/del overlap on " + name_of(f));
        }
        for (FluentId f : set_intersection(a.pre_pos, a.pre_neg)) {
            report.push_back("action " + a.name + ": pre_pos/pre_neg overlap on " + name_of(f));
        }
    }

    if (task.init.size() != task.num_fluents()) {
        report.push_back("init state covers " + std::to_string(task.init.size()) +
                         " fluents, task has " + std::to_string(task.num_fluents()));
    }
    if (!sorted_unique(task.goal)) {
        report.push_back("goal is not sorted and duplicate-free");
    }
    for (FluentId g : task.goal) {
        if (!in_range(task, g)) {
            report.push_back("goal out of range: " + std::to_string(g));
        }
    }
    return report;
}

bool is_applicable(const State& state, const Action& action) {
    for (FluentId f : action.pre_pos) {
        if (!state.test(f)) {
            return false;
        }
    }
    for (FluentId f : action.pre_neg) {
        if (state.test(f)) {
            return false;
        }
    }
    return true;
}

std::string applicability_failure(const Task& task, const State& state, const Action& action) {
    for (FluentId f : action.pre_pos) {
        if (!state.test(f)) {
            return task.fluent_name(f) + " not true";
        }
    }
    for (FluentId f : action.pre_neg) {
        if (state.test(f)) {
            return task.fluent_name(f) + " must be false";
        }
    }
    return {};
}

namespace {

State apply_effects(const State& state, const Action& action) {
    State next = state;
    for (FluentId f : action.del) {
        next.reset(f);
    }
    for (FluentId f : action.add) {
        next.set(f);
    }
    return next;
}

}  // namespace

State progress(const State& state, const Action& action) {
    if (!is_applicable(state, action)) {
        std::string reason = "precondition violated";
        for (FluentId f : action.pre_pos) {
            if (!state.test(f)) {
                reason = "fluent " + std::to_string(f) + " not true";
                break;
            }
        }
        throw InapplicableActionError(0, action.name, reason);
    }
    return apply_effects(state, action);
}

State progress(const Task& task, const State& state, const Action& action) {
    if (auto why = applicability_failure(task, state, action); !why.empty()) {
        throw InapplicableActionError(0, action.name, why);
    }
    return apply_effects(state, action);
}

Trace apply_sequence(const State& init, const Plan& plan, const Task& task) {
    Trace trace;
    trace.states.reserve(plan.size() + 1);
    trace.states.push_back(init);
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        ActionId id = plan.steps[i];
        if (id < 0 || static_cast<std::size_t>(id) >= task.actions.size()) {
            throw InapplicableActionError(i, "#" + std::to_string(id), "unknown action id");
        }
        const Action& a = task.actions[static_cast<std::size_t>(id)];
        const State& cur = trace.states.back();
        if (auto why = applicability_failure(task, cur, a); !why.empty()) {
            throw InapplicableActionError(i, a.name, why);
        }
        trace.states.push_back(apply_effects(cur, a));
    }
    return trace;
}

PlanValidation validate_plan(const Task& task, const Plan& plan) {
    PlanValidation out;
    out.trace.states.push_back(task.init);
    for (ActionId id : plan.steps) {
        if (id >= 0 && static_cast<std::size_t>(id) < task.actions.size()) {
            out.cost += task.actions[static_cast<std::size_t>(id)].cost;
        }
    }
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
        ActionId id = plan.steps[i];
        if (id < 0 || static_cast<std::size_t>(id) >= task.actions.size()) {
            out.failure = PlanFailure::inapplicable;
            out.failed_step = i;
            out.message = "step " + std::to_string(i) + ": unknown action id " + std::to_string(id);
            return out;
        }
        const Action& a = task.actions[static_cast<std::size_t>(id)];
        const State& cur = out.trace.states.back();
        if (auto why = applicability_failure(task, cur, a); !why.empty()) {
            out.failure = PlanFailure::inapplicable;
            out.failed_step = i;
            out.message = "step " + std::to_string(i) + " (" + a.name + "): " + why;
            return out;
        }
        out.trace.states.push_back(apply_effects(cur, a));
    }
    const State& last = out.trace.final_state();
    for (FluentId g : task.goal) {
        if (!last.test(g)) {
            out.unsatisfied_goals.push_back(g);
        }
    }
    if (!out.unsatisfied_goals.empty()) {
        out.failure = PlanFailure::goal_unsatisfied;
        out.failed_step = plan.size();
        std::ostringstream msg;
        msg << "goal not satisfied:";
        for (FluentId g : out.unsatisfied_goals) {
            msg << ' ' << task.fluent_name(g);
        }
        out.message = msg.str();
        return out;
    }
    out.valid = true;
    return out;
}

std::string to_string(PlanFailure failure) {
    switch (failure) {
        case PlanFailure::none: return "none";
        case PlanFailure::inapplicable: return "inapplicable";
        case PlanFailure::goal_unsatisfied: return "goal-unsatisfied";
    }
    return "unknown";
}

std::string format_state(const Task& task, const State& state) {
    std::string out = "{";
    bool first = true;
    for (FluentId f : state.fluents()) {
        if (!first) {
            out += ", ";
        }
        out += task.fluent_name(f);
        first = false;
    }
    return out + "}";
}

}  // namespace commitplan
