#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "commitplan/compiler.hpp"
#include "commitplan/strips.hpp"

namespace commitplan {

// Who made a goal hold for good: the initial state or a plan step.
struct Achiever {
    bool initial = false;
    std::size_t step = 0;

    static Achiever init() { return {true, 0}; }
    static Achiever at(std::size_t step) { return {false, step}; }
    bool operator==(const Achiever&) const = default;
};

// [added_at, deleted_at) in plan positions: the goal became true through step
// `added_at` and was undone by step `deleted_at`.
struct TransientInterval {
    std::size_t added_at = 0;
    std::size_t deleted_at = 0;
    bool operator==(const TransientInterval&) const = default;
};

struct GoalAchievement {
    FluentId goal = 0;
    Achiever achiever;
    std::vector<TransientInterval> transient;
};

struct AchievementReport {
    std::vector<GoalAchievement> goals;  // ascending goal id

    const GoalAchievement& of(FluentId goal) const;
};

// Post-hoc attribution of every goal to the step after which it stays true.
// Throws InvalidPlanError if the plan does not solve the task.
AchievementReport permanent_achievers(const Task& task, const Plan& plan);

struct StepMapping {
    std::size_t source_step = 0;
    std::size_t target_step = 0;
    ActionId source_action = 0;
    ActionId target_action = 0;
    Variant variant = Variant::unchanged;
};

struct MappingResult {
    Plan plan;
    Cost cost = 0;
    std::vector<StepMapping> steps;
    std::map<FluentId, std::size_t> commit_steps;  // forward maps only
};

// Base plan -> commit-task plan, committing each pending goal at its
// permanent achiever. Throws InvalidPlanError for an invalid input plan.
MappingResult forward_map(const Task& task, const Plan& plan, const CompiledTask& compiled);

// Commit-task plan -> base plan via the provenance table.
MappingResult backward_map(const CompiledTask& compiled, const Plan& plan_c);

// Step at which each pending goal's commit fluent was set in a commit-task plan.
std::map<FluentId, std::size_t> commit_achievers(const CompiledTask& compiled, const Plan& plan_c);

}  // namespace commitplan
