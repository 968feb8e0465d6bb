#include "commitplan/compiler.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "commitplan/errors.hpp"

namespace commitplan {

std::string to_string(GoalClass c) {
    switch (c) {
        case GoalClass::add_only: return "add-only";
        case GoalClass::del_only: return "del-only";
        case GoalClass::add_and_del: return "add-and-del";
        case GoalClass::neutral: return "neutral";
    }
    return "unknown";
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::commit: return "commit";
        case Variant::forcecommit: return "forcecommit";
        case Variant::simultaneous: return "simultaneous";
        case Variant::unchanged: return "unchanged";
    }
    return "unknown";
}

Variant variant_from_string(std::string_view s) {
    if (s == "commit") return Variant::commit;
    if (s == "forcecommit") return Variant::forcecommit;
    if (s == "simultaneous") return Variant::simultaneous;
    if (s == "unchanged") return Variant::unchanged;
    throw InputError("unknown variant " + std::string(s));
}

FluentId CommitFluentMap::commit(FluentId g) const {
    auto it = std::lower_bound(goals.begin(), goals.end(), g);
    if (it == goals.end() || *it != g) {
        return -1;
    }
    return commit_of[static_cast<std::size_t>(it - goals.begin())];
}

FluentId CommitFluentMap::goal(FluentId c) const {
    auto it = std::find(commit_of.begin(), commit_of.end(), c);
    if (it == commit_of.end()) {
        return -1;
    }
    return goals[static_cast<std::size_t>(it - commit_of.begin())];
}

std::span<const ActionId> CompiledTask::variants_of(ActionId base_action) const {
    auto b = static_cast<std::size_t>(base_action);
    if (base_action < 0 || b + 1 >= variant_offsets.size()) {
        throw CorruptProvenanceError("no variants recorded for base action " + std::to_string(base_action));
    }
    return std::span<const ActionId>(variant_ids).subspan(variant_offsets[b],
                                                          variant_offsets[b + 1] - variant_offsets[b]);
}

void CompiledTask::index_variants() {
    std::size_t n = base.actions.size();
    std::vector<std::vector<ActionId>> buckets(n);
    for (std::size_t i = 0; i < provenance.size(); ++i) {
        auto b = static_cast<std::size_t>(provenance[i].base_action);
        if (provenance[i].base_action < 0 || b >= n) {
            throw CorruptProvenanceError("compiled action " + std::to_string(i) +
                                         " refers to unknown base action " +
                                         std::to_string(provenance[i].base_action));
        }
        buckets[b].push_back(static_cast<ActionId>(i));
    }
    variant_offsets.assign(1, 0);
    variant_ids.clear();
    for (const auto& bucket : buckets) {
        variant_ids.insert(variant_ids.end(), bucket.begin(), bucket.end());
        variant_offsets.push_back(variant_ids.size());
    }
}

FluentSet pending_goals(const Task& task) {
    std::vector<bool> addable(task.num_fluents(), false);
    for (const auto& a : task.actions) {
        for (FluentId f : a.add) {
            addable[static_cast<std::size_t>(f)] = true;
        }
    }
    FluentSet out;
    for (FluentId g : task.goal) {
        if (!task.init.test(g) && addable[static_cast<std::size_t>(g)]) {
            out.push_back(g);
        }
    }
    return out;
}

GoalClass classify_action(const Action& action, const FluentSet& pending) {
    auto touches = [&](const FluentSet& effects) {
        return std::any_of(effects.begin(), effects.end(),
                           [&](FluentId f) { return contains(pending, f); });
    };
    bool adds = touches(action.add);
    bool dels = touches(action.del);
    if (adds && dels) return GoalClass::add_and_del;
    if (adds) return GoalClass::add_only;
    if (dels) return GoalClass::del_only;
    return GoalClass::neutral;
}

std::vector<FluentSet> commit_subsets(const Task& task, const FluentSet& goals, unsigned max_exponent,
                                      std::string_view action_name) {
    const std::size_t n = goals.size();
    if (n > max_exponent) {
        std::string who = action_name.empty() ? std::string("goal set") : "action " + std::string(action_name);
        throw LimitExceededError(who + " adds " + std::to_string(n) +
                                 " pending goals; 2^" + std::to_string(n) +
                                 " commit variants exceed the cap of 2^" + std::to_string(max_exponent));
    }

    std::vector<FluentId> by_name(goals.begin(), goals.end());
    std::sort(by_name.begin(), by_name.end(), [&](FluentId a, FluentId b) {
        return task.fluent_name(a) < task.fluent_name(b);
    });

    std::vector<FluentSet> out;
    out.reserve(std::size_t{1} << n);
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k <= n; ++k) {
        // Index combinations in lexicographic order over the name-sorted goals.
        idx.resize(k);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            FluentSet subset;
            for (auto i : idx) {
                subset.push_back(by_name[i]);
            }
            normalize(subset);
            out.push_back(std::move(subset));

            std::size_t pos = k;
            while (pos > 0 && idx[pos - 1] == n - k + pos - 1) {
                --pos;
            }
            if (pos == 0) {
                break;
            }
            ++idx[pos - 1];
            for (std::size_t j = pos; j < k; ++j) {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    return out;
}

std::string commit_fluent_name(std::string_view goal_name) {
    return std::string(goal_name) + std::string(kCommitSuffix);
}

namespace {

std::string joined_goal_names(const Task& task, const FluentSet& goals) {
    std::vector<std::string> names;
    for (FluentId g : goals) {
        names.push_back(task.fluent_name(g));
    }
    std::sort(names.begin(), names.end());
    std::string out;
    for (const auto& n : names) {
        out += "--" + n;
    }
    return out;
}

FluentSet commit_ids(const CommitFluentMap& map, const FluentSet& goals) {
    FluentSet out;
    for (FluentId g : goals) {
        out.push_back(map.commit(g));
    }
    normalize(out);
    return out;
}

}  // namespace

CompiledTask compile(const Task& task, const CompilationOptions& options) {
    if (auto report = validate_task(task); !report.empty()) {
        throw InputError("cannot compile an invalid task: " + report.front());
    }

    CompiledTask out;
    out.base = task;
    out.pending_goals = pending_goals(task);

    Task& tc = out.task;
    tc.fluents = task.fluents;

    std::unordered_set<std::string> fluent_names;
    for (const auto& f : task.fluents) {
        fluent_names.insert(f.name);
    }
    out.commit_map.goals = out.pending_goals;
    for (FluentId g : out.pending_goals) {
        std::string name = commit_fluent_name(task.fluent_name(g));
        if (!fluent_names.insert(name).second) {
            throw NameCollisionError("commit fluent name " + name + " collides with an existing fluent");
        }
        auto id = static_cast<FluentId>(tc.fluents.size());
        tc.fluents.push_back({id, name});
        out.commit_map.commit_of.push_back(id);
    }

    std::unordered_set<std::string> action_names;
    auto emit = [&](const Action& base, std::string name, FluentSet extra_pre_neg, FluentSet extra_add,
                    FluentSet committed, Variant variant) {
        if (!action_names.insert(name).second) {
            throw NameCollisionError("compiled action name " + name + " is not unique");
        }
        Action a = base;
        a.id = static_cast<ActionId>(tc.actions.size());
        a.name = std::move(name);
        a.pre_neg = set_union(a.pre_neg, extra_pre_neg);
        a.add = set_union(a.add, extra_add);
        tc.actions.push_back(std::move(a));
        out.provenance.push_back({base.id, std::move(committed), variant});
    };

    for (const Action& a : task.actions) {
        const GoalClass cls = classify_action(a, out.pending_goals);
        const FluentSet added = set_intersection(a.add, out.pending_goals);
        const FluentSet deleted = set_intersection(a.del, out.pending_goals);
        switch (cls) {
            case GoalClass::neutral:
                emit(a, a.name, {}, {}, {}, Variant::unchanged);
                break;
            case GoalClass::del_only:
                emit(a, a.name + "--forcecommit", commit_ids(out.commit_map, deleted), {}, {},
                     Variant::forcecommit);
                break;
            case GoalClass::add_only:
                for (auto& subset : commit_subsets(task, added, options.max_subset_exponent, a.name)) {
                    std::string name = subset.empty() ? a.name
                                                      : a.name + "--commit" + joined_goal_names(task, subset);
                    FluentSet commits = commit_ids(out.commit_map, subset);
                    emit(a, std::move(name), commits, commits, std::move(subset), Variant::commit);
                }
                break;
            case GoalClass::add_and_del: {
                const FluentSet guard = commit_ids(out.commit_map, deleted);
                for (auto& subset : commit_subsets(task, added, options.max_subset_exponent, a.name)) {
                    std::string name = a.name + "--sim" + joined_goal_names(task, subset);
                    FluentSet commits = commit_ids(out.commit_map, subset);
                    emit(a, std::move(name), set_union(commits, guard), commits, std::move(subset),
                         Variant::simultaneous);
                }
                break;
            }
        }
    }

    tc.init = State(tc.fluents.size(), task.init.fluents());
    for (FluentId g : task.goal) {
        FluentId c = out.commit_map.commit(g);
        tc.goal.push_back(c >= 0 ? c : g);
    }
    normalize(tc.goal);
    out.index_variants();
    return out;
}

SizeForecast forecast_size(const Task& task) {
    SizeForecast out;
    const FluentSet pending = pending_goals(task);
    for (const Action& a : task.actions) {
        switch (classify_action(a, pending)) {
            case GoalClass::add_only:
            case GoalClass::add_and_del: {
                auto n = static_cast<unsigned>(set_intersection(a.add, pending).size());
                out.max_subset_exponent = std::max(out.max_subset_exponent, n);
                std::uint64_t variants = n >= 64 ? std::numeric_limits<std::uint64_t>::max()
                                                 : (std::uint64_t{1} << n);
                if (out.compiled_action_count > std::numeric_limits<std::uint64_t>::max() - variants) {
                    out.compiled_action_count = std::numeric_limits<std::uint64_t>::max();
                } else {
                    out.compiled_action_count += variants;
                }
                break;
            }
            case GoalClass::del_only:
            case GoalClass::neutral:
                ++out.compiled_action_count;
                break;
        }
    }
    return out;
}

}  // namespace commitplan
