#include "commitplan/search.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <memory>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "commitplan/errors.hpp"

namespace commitplan {

namespace {

Cost saturating_add(Cost a, Cost b) {
    if (a == kInfiniteCost || b == kInfiniteCost || a > kInfiniteCost - b) {
        return kInfiniteCost;
    }
    return a + b;
}

}  // namespace

RelaxedExploration::RelaxedExploration(const Task& task)
    : task_(&task),
      consumers_(task.num_fluents()),
      fluent_cost_(task.num_fluents()),
      action_support_(task.actions.size()),
      unsatisfied_(task.actions.size()) {
    for (const auto& a : task.actions) {
        for (FluentId f : a.pre_pos) {
            consumers_[static_cast<std::size_t>(f)].push_back(a.id);
        }
    }
}

Cost RelaxedExploration::h_max(const State& state) { return evaluate(state, Combine::max); }

Cost RelaxedExploration::h_add(const State& state) { return evaluate(state, Combine::sum); }

Cost RelaxedExploration::evaluate(const State& state, Combine mode) {
    const Task& task = *task_;
    if (task.is_goal(state)) {
        return 0;
    }

    using Entry = std::pair<Cost, FluentId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    std::fill(fluent_cost_.begin(), fluent_cost_.end(), kInfiniteCost);
    std::fill(action_support_.begin(), action_support_.end(), 0);

    auto relax = [&](FluentId f, Cost c) {
        auto& cur = fluent_cost_[static_cast<std::size_t>(f)];
        if (c < cur) {
            cur = c;
            queue.emplace(c, f);
        }
    };
    auto fire = [&](const Action& a) {
        Cost c = saturating_add(action_support_[static_cast<std::size_t>(a.id)], a.cost);
        for (FluentId g : a.add) {
            relax(g, c);
        }
    };

    for (FluentId f : state.fluents()) {
        relax(f, 0);
    }
    for (const auto& a : task.actions) {
        unsatisfied_[static_cast<std::size_t>(a.id)] = static_cast<int>(a.pre_pos.size());
        if (a.pre_pos.empty()) {
            fire(a);
        }
    }

    while (!queue.empty()) {
        auto [c, f] = queue.top();
        queue.pop();
        if (c != fluent_cost_[static_cast<std::size_t>(f)]) {
            continue;
        }
        for (ActionId id : consumers_[static_cast<std::size_t>(f)]) {
            auto i = static_cast<std::size_t>(id);
            if (unsatisfied_[i] <= 0) {
                continue;
            }
            action_support_[i] = mode == Combine::max ? std::max(action_support_[i], c)
                                                      : saturating_add(action_support_[i], c);
            if (--unsatisfied_[i] == 0) {
                fire(task.actions[i]);
            }
        }
    }

    Cost h = 0;
    for (FluentId g : task.goal) {
        Cost c = fluent_cost_[static_cast<std::size_t>(g)];
        if (c == kInfiniteCost) {
            return kInfiniteCost;
        }
        h = mode == Combine::max ? std::max(h, c) : saturating_add(h, c);
    }
    return h;
}

Cost h_max(const State& state, const Task& task) { return RelaxedExploration(task).h_max(state); }

Cost h_add(const State& state, const Task& task) { return RelaxedExploration(task).h_add(state); }

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::solved: return "solved";
        case Outcome::unsolvable: return "unsolvable";
        case Outcome::limit: return "limit";
    }
    return "unknown";
}

std::string to_string(LimitKind k) {
    switch (k) {
        case LimitKind::none: return "none";
        case LimitKind::time: return "time";
        case LimitKind::memory: return "memory";
        case LimitKind::expansions: return "expansions";
    }
    return "unknown";
}

namespace {

constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

struct Node {
    State state;
    Cost g = 0;
    Cost h = 0;
    std::size_t parent = kNoParent;
    ActionId via = -1;
    bool closed = false;
};

struct OpenEntry {
    Cost primary;
    Cost secondary;
    std::uint64_t seq;
    std::size_t node;
    Cost g;

    bool operator>(const OpenEntry& o) const {
        return std::tie(primary, secondary, seq) > std::tie(o.primary, o.secondary, o.seq);
    }
};

struct SearchPolicy {
    std::function<Cost(const State&)> heuristic;
    // Open-list keys from (g, h).
    std::function<std::pair<Cost, Cost>(Cost, Cost)> keys;
    bool reopen_closed = false;
    bool update_open_g = true;
};

class Clock {
public:
    Clock() : start_(std::chrono::steady_clock::now()) {}
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

SearchResult best_first(const Task& task, const SearchLimits& limits, const SearchPolicy& policy) {
    Clock clock;
    SearchResult result;
    auto& stats = result.stats;

    std::vector<Node> nodes;
    std::unordered_map<State, std::size_t, StateHash> index;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
    std::uint64_t seq = 0;

    auto finish = [&](Outcome outcome, LimitKind limit) {
        result.outcome = outcome;
        result.limit = limit;
        stats.peak_stored_states = nodes.size();
        stats.wall_time_s = clock.elapsed();
        return result;
    };

    auto push = [&](std::size_t id) {
        const Node& n = nodes[id];
        auto [p, s] = policy.keys(n.g, n.h);
        open.push({p, s, seq++, id, n.g});
    };

    {
        Node root;
        root.state = task.init;
        root.h = policy.heuristic(task.init);
        nodes.push_back(std::move(root));
        index.emplace(task.init, 0);
        if (nodes[0].h == kInfiniteCost) {
            return finish(Outcome::unsolvable, LimitKind::none);
        }
        push(0);
    }

    while (!open.empty()) {
        OpenEntry top = open.top();
        open.pop();
        Node& node = nodes[top.node];
        if (node.closed || top.g != node.g) {
            continue;
        }

        if (task.is_goal(node.state)) {
            Plan plan;
            for (std::size_t cur = top.node; nodes[cur].parent != kNoParent; cur = nodes[cur].parent) {
                plan.steps.push_back(nodes[cur].via);
            }
            std::reverse(plan.steps.begin(), plan.steps.end());
            result.cost = node.g;
            result.plan = std::move(plan);
            return finish(Outcome::solved, LimitKind::none);
        }

        if (limits.max_expansions && stats.expansions >= *limits.max_expansions) {
            return finish(Outcome::limit, LimitKind::expansions);
        }
        if (limits.time_limit_s && (stats.expansions & 255) == 0 && clock.elapsed() > *limits.time_limit_s) {
            return finish(Outcome::limit, LimitKind::time);
        }

        node.closed = true;
        ++stats.expansions;
        const std::size_t parent = top.node;
        // `node` may dangle once nodes grows; copy what we need.
        const State state = node.state;
        const Cost g = node.g;

        for (const Action& a : task.actions) {
            if (!is_applicable(state, a)) {
                continue;
            }
            ++stats.generations;
            State succ = state;
            for (FluentId f : a.del) succ.reset(f);
            for (FluentId f : a.add) succ.set(f);
            const Cost succ_g = g + a.cost;

            auto it = index.find(succ);
            if (it == index.end()) {
                Node child;
                child.state = succ;
                child.g = succ_g;
                child.parent = parent;
                child.via = a.id;
                child.h = policy.heuristic(succ);
                std::size_t id = nodes.size();
                const bool dead = child.h == kInfiniteCost;
                child.closed = dead;
                nodes.push_back(std::move(child));
                index.emplace(std::move(succ), id);
                if (limits.max_states && nodes.size() > *limits.max_states) {
                    return finish(Outcome::limit, LimitKind::memory);
                }
                if (!dead) {
                    push(id);
                }
                continue;
            }

            Node& old = nodes[it->second];
            if (old.h == kInfiniteCost || succ_g >= old.g) {
                continue;
            }
            if (old.closed) {
                if (!policy.reopen_closed) {
                    continue;
                }
                old.closed = false;
                ++stats.reopened;
            } else if (!policy.update_open_g) {
                continue;
            }
            old.g = succ_g;
            old.parent = parent;
            old.via = a.id;
            push(it->second);
        }
    }
    return finish(Outcome::unsolvable, LimitKind::none);
}

}  // namespace

SearchResult solve_optimal(const Task& task, const SearchLimits& limits, OptimalHeuristic heuristic) {
    SearchPolicy policy;
    if (heuristic == OptimalHeuristic::h_max) {
        auto exploration = std::make_shared<RelaxedExploration>(task);
        policy.heuristic = [exploration](const State& s) { return exploration->h_max(s); };
    } else {
        policy.heuristic = [](const State&) { return Cost{0}; };
    }
    policy.keys = [](Cost g, Cost h) { return std::pair{g + h, h}; };
    // Both heuristics are consistent; closed nodes already carry optimal g.
    policy.reopen_closed = false;
    policy.update_open_g = true;
    return best_first(task, limits, policy);
}

SearchResult solve_greedy(const Task& task, const SearchLimits& limits) {
    SearchPolicy policy;
    auto exploration = std::make_shared<RelaxedExploration>(task);
    policy.heuristic = [exploration](const State& s) { return exploration->h_add(s); };
    policy.keys = [](Cost, Cost h) { return std::pair{h, Cost{0}}; };
    policy.reopen_closed = false;
    policy.update_open_g = false;
    return best_first(task, limits, policy);
}

std::vector<State> enumerate_reachable(const Task& task, std::size_t cap) {
    std::vector<State> order{task.init};
    std::unordered_set<State, StateHash> seen{task.init};
    if (cap < 1) {
        throw LimitExceededError("reachability cap of 0 states exceeded");
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        const State cur = order[head];
        for (const Action& a : task.actions) {
            if (!is_applicable(cur, a)) {
                continue;
            }
            State succ = cur;
            for (FluentId f : a.del) succ.reset(f);
            for (FluentId f : a.add) succ.set(f);
            if (seen.insert(succ).second) {
                if (order.size() >= cap) {
                    throw LimitExceededError("more than " + std::to_string(cap) + " reachable states");
                }
                order.push_back(std::move(succ));
            }
        }
    }
    return order;
}

}  // namespace commitplan
