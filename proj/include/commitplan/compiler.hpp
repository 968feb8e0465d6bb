#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commitplan/strips.hpp"

namespace commitplan {

// How an action interacts with the pending goals.
enum class GoalClass {
    add_only,     // adds pending goals, deletes none
    del_only,     // deletes pending goals, adds none
    add_and_del,  // both
    neutral,      // neither
};

enum class Variant { commit, forcecommit, simultaneous, unchanged };

std::string to_string(GoalClass c);
std::string to_string(Variant v);
Variant variant_from_string(std::string_view s);

inline constexpr std::string_view kCommitSuffix = "--commit";

struct CompilationOptions {
    // Largest |add(a) ∩ pending| for which all 2^n commit subsets are generated.
    unsigned max_subset_exponent = 12;
};

struct CommitFluentMap {
    FluentSet goals;                    // pending goals, ascending
    std::vector<FluentId> commit_of;    // parallel to goals

    // Commit fluent of a pending goal, or -1.
    FluentId commit(FluentId goal) const;
    // Pending goal of a commit fluent, or -1.
    FluentId goal(FluentId commit_fluent) const;
};

struct CompiledAction {
    ActionId base_action = 0;
    FluentSet committed;  // pending goals whose commit fluents this variant sets
    Variant variant = Variant::unchanged;

    bool operator==(const CompiledAction&) const = default;
};

struct CompiledTask {
    Task base;
    Task task;  // the commit task
    CommitFluentMap commit_map;
    std::vector<CompiledAction> provenance;  // indexed by compiled action id
    FluentSet pending_goals;

    // Compiled action ids derived from one base action, in output order.
    std::span<const ActionId> variants_of(ActionId base_action) const;

    // Filled by compile(); rebuilt by index_variants() after manual construction.
    std::vector<std::size_t> variant_offsets;
    std::vector<ActionId> variant_ids;
    void index_variants();
};

FluentSet pending_goals(const Task& task);

GoalClass classify_action(const Action& action, const FluentSet& pending);

// All subsets of `goals`, ordered by size and then lexicographically by the
// sorted member names. Throws LimitExceededError above the exponent cap.
std::vector<FluentSet> commit_subsets(const Task& task, const FluentSet& goals,
                                      unsigned max_exponent = CompilationOptions{}.max_subset_exponent,
                                      std::string_view action_name = {});

std::string commit_fluent_name(std::string_view goal_name);

CompiledTask compile(const Task& task, const CompilationOptions& options = {});

struct SizeForecast {
    std::uint64_t compiled_action_count = 0;
    unsigned max_subset_exponent = 0;
};

SizeForecast forecast_size(const Task& task);

}  // namespace commitplan
