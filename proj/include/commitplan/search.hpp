#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "commitplan/strips.hpp"

namespace commitplan {

inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

// Delete-relaxation estimates. Negative preconditions are ignored, which keeps
// h_max admissible. Goal sets unreachable in the relaxation yield kInfiniteCost.
class RelaxedExploration {
public:
    explicit RelaxedExploration(const Task& task);

    Cost h_max(const State& state);
    Cost h_add(const State& state);

private:
    enum class Combine { max, sum };
    Cost evaluate(const State& state, Combine mode);

    const Task* task_;
    std::vector<std::vector<ActionId>> consumers_;  // fluent -> actions with it in pre_pos
    std::vector<Cost> fluent_cost_;
    std::vector<Cost> action_support_;
    std::vector<int> unsatisfied_;
};

Cost h_max(const State& state, const Task& task);
Cost h_add(const State& state, const Task& task);

struct SearchLimits {
    std::optional<double> time_limit_s;
    std::optional<std::size_t> max_states;
    std::optional<std::size_t> max_expansions;
};

enum class Outcome { solved, unsolvable, limit };
enum class LimitKind { none, time, memory, expansions };

struct SearchStatistics {
    std::size_t expansions = 0;
    std::size_t generations = 0;
    std::size_t reopened = 0;
    std::size_t peak_stored_states = 0;
    double wall_time_s = 0.0;

    bool operator==(const SearchStatistics&) const = default;
};

struct SearchResult {
    Outcome outcome = Outcome::unsolvable;
    LimitKind limit = LimitKind::none;
    std::optional<Plan> plan;
    Cost cost = 0;
    SearchStatistics stats;
};

std::string to_string(Outcome o);
std::string to_string(LimitKind k);

enum class OptimalHeuristic { blind, h_max };

// A* with tie-breaking on lower f, then lower h, then insertion order.
SearchResult solve_optimal(const Task& task, const SearchLimits& limits = {},
                           OptimalHeuristic heuristic = OptimalHeuristic::h_max);

// Greedy best-first search on h_add.
SearchResult solve_greedy(const Task& task, const SearchLimits& limits = {});

// Breadth-first enumeration of all reachable states, in BFS order.
// Throws LimitExceededError when more than `cap` states are found.
std::vector<State> enumerate_reachable(const Task& task, std::size_t cap);

}  // namespace commitplan
