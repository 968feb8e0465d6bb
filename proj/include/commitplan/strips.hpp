#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace commitplan {

using FluentId = int;
using ActionId = int;
using Cost = std::int64_t;

// Sorted, duplicate-free list of fluent ids.
using FluentSet = std::vector<FluentId>;

void normalize(FluentSet& set);
bool contains(const FluentSet& set, FluentId id);
FluentSet set_intersection(const FluentSet& a, const FluentSet& b);
FluentSet set_union(const FluentSet& a, const FluentSet& b);

struct Fluent {
    FluentId id = 0;
    std::string name;

    bool operator==(const Fluent&) const = default;
};

struct Action {
    ActionId id = 0;
    std::string name;
    FluentSet pre_pos;
    FluentSet pre_neg;
    FluentSet add;
    FluentSet del;
    Cost cost = 1;

    bool operator==(const Action&) const = default;
};

// Truth assignment over a fixed fluent universe, stored as a bitset.
class State {
public:
    State() = default;
    explicit State(std::size_t num_fluents);
    State(std::size_t num_fluents, std::span<const FluentId> true_fluents);

    std::size_t size() const { return size_; }
    bool test(FluentId id) const {
        return (words_[static_cast<std::size_t>(id) >> 6] >> (static_cast<std::size_t>(id) & 63)) & 1U;
    }
    void set(FluentId id) { words_[static_cast<std::size_t>(id) >> 6] |= bit(id); }
    void reset(FluentId id) { words_[static_cast<std::size_t>(id) >> 6] &= ~bit(id); }

    // True fluent ids in ascending order.
    FluentSet fluents() const;
    std::size_t count() const;
    std::size_t hash() const;

    bool operator==(const State&) const = default;

private:
    static std::uint64_t bit(FluentId id) { return std::uint64_t{1} << (static_cast<std::size_t>(id) & 63); }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct StateHash {
    std::size_t operator()(const State& s) const { return s.hash(); }
};

struct Task {
    std::vector<Fluent> fluents;
    std::vector<Action> actions;
    State init;
    FluentSet goal;

    std::size_t num_fluents() const { return fluents.size(); }
    std::optional<FluentId> find_fluent(std::string_view name) const;
    std::optional<ActionId> find_action(std::string_view name) const;
    const std::string& fluent_name(FluentId id) const { return fluents.at(static_cast<std::size_t>(id)).name; }
    bool is_goal(const State& s) const;

    bool operator==(const Task&) const = default;
};

// Incremental construction by name; ids are assigned densely in insertion order.
class TaskBuilder {
public:
    FluentId add_fluent(const std::string& name);
    FluentId fluent(const std::string& name) const;
    ActionId add_action(const std::string& name,
                        const std::vector<std::string>& pre_pos,
                        const std::vector<std::string>& pre_neg,
                        const std::vector<std::string>& add,
                        const std::vector<std::string>& del,
                        Cost cost = 1);
    void set_init(const std::vector<std::string>& names);
    void set_goal(const std::vector<std::string>& names);
    Task build() const;

private:
    FluentSet ids(const std::vector<std::string>& names) const;

    std::vector<Fluent> fluents_;
    std::unordered_map<std::string, FluentId> by_name_;
    std::vector<Action> actions_;
    FluentSet init_;
    FluentSet goal_;
};

struct Plan {
    std::vector<ActionId> steps;

    std::size_t size() const { return steps.size(); }
    bool empty() const { return steps.empty(); }
    bool operator==(const Plan&) const = default;
};

// states[0] is the start state; states[i + 1] results from step i.
struct Trace {
    std::vector<State> states;

    const State& final_state() const { return states.back(); }
};

Cost plan_cost(const Task& task, const Plan& plan);

// Every violated structural invariant, rendered with fluent/action names.
std::vector<std::string> validate_task(const Task& task);

bool is_applicable(const State& state, const Action& action);

// Human readable reason the action is not applicable, empty if it is.
std::string applicability_failure(const Task& task, const State& state, const Action& action);

// Throws InapplicableActionError when the action is not applicable.
State progress(const State& state, const Action& action);
State progress(const Task& task, const State& state, const Action& action);

// Throws InapplicableActionError at the first failing step.
Trace apply_sequence(const State& init, const Plan& plan, const Task& task);

enum class PlanFailure { none, inapplicable, goal_unsatisfied };

struct PlanValidation {
    bool valid = false;
    Cost cost = 0;
    Trace trace;  // prefix up to the failing step when inapplicable
    PlanFailure failure = PlanFailure::none;
    std::size_t failed_step = 0;
    FluentSet unsatisfied_goals;
    std::string message;
};

PlanValidation validate_plan(const Task& task, const Plan& plan);

std::string to_string(PlanFailure failure);
std::string format_state(const Task& task, const State& state);

}  // namespace commitplan
