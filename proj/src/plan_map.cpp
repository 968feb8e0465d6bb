#include "commitplan/plan_map.hpp"

#include <algorithm>

#include "commitplan/errors.hpp"

namespace commitplan {

const GoalAchievement& AchievementReport::of(FluentId goal) const {
    for (const auto& g : goals) {
        if (g.goal == goal) {
            return g;
        }
    }
    throw InputError("no achievement record for fluent " + std::to_string(goal));
}

namespace {

PlanValidation require_valid(const Task& task, const Plan& plan, const char* what) {
    PlanValidation v = validate_plan(task, plan);
    if (!v.valid) {
        throw InvalidPlanError(std::string(what) + " is not a valid plan: " + v.message);
    }
    return v;
}

}  // namespace

AchievementReport permanent_achievers(const Task& task, const Plan& plan) {
    const PlanValidation v = require_valid(task, plan, "input plan");
    const auto& states = v.trace.states;
    const std::size_t n = plan.size();

    AchievementReport report;
    for (FluentId g : task.goal) {
        GoalAchievement rec;
        rec.goal = g;

        std::optional<std::size_t> last_false;
        std::optional<std::size_t> open_add;
        for (std::size_t i = 0; i < n; ++i) {
            const bool before = states[i].test(g);
            const bool after = states[i + 1].test(g);
            if (!before) {
                last_false = i;
            }
            if (!before && after) {
                open_add = i;
            } else if (before && !after) {
                if (open_add) {
                    rec.transient.push_back({*open_add, i});
                }
                open_add.reset();
            }
        }
        rec.achiever = last_false ? Achiever::at(*last_false) : Achiever::init();
        report.goals.push_back(std::move(rec));
    }
    return report;
}

MappingResult forward_map(const Task& task, const Plan& plan, const CompiledTask& compiled) {
    const AchievementReport achievement = permanent_achievers(task, plan);

    MappingResult out;
    for (std::size_t k = 0; k < plan.size(); ++k) {
        const ActionId base_id = plan.steps[k];
        const Action& a = task.actions.at(static_cast<std::size_t>(base_id));

        FluentSet committed;
        for (FluentId g : set_intersection(a.add, compiled.pending_goals)) {
            const Achiever& who = achievement.of(g).achiever;
            if (!who.initial && who.step == k) {
                committed.push_back(g);
            }
        }

        Variant wanted = Variant::unchanged;
        switch (classify_action(a, compiled.pending_goals)) {
            case GoalClass::neutral: wanted = Variant::unchanged; break;
            case GoalClass::del_only: wanted = Variant::forcecommit; break;
            case GoalClass::add_only: wanted = Variant::commit; break;
            case GoalClass::add_and_del: wanted = Variant::simultaneous; break;
        }

        std::optional<ActionId> chosen;
        for (ActionId cid : compiled.variants_of(base_id)) {
            const CompiledAction& prov = compiled.provenance[static_cast<std::size_t>(cid)];
            if (prov.variant == wanted && prov.committed == committed) {
                chosen = cid;
                break;
            }
        }
        if (!chosen) {
            throw CorruptProvenanceError("no " + to_string(wanted) + " variant of " + a.name +
                                         " with the required commit subset");
        }
        out.plan.steps.push_back(*chosen);
        out.steps.push_back({k, k, base_id, *chosen, wanted});
        for (FluentId g : committed) {
            out.commit_steps[g] = k;
        }
    }

    const PlanValidation v = validate_plan(compiled.task, out.plan);
    if (!v.valid) {
        throw InternalError("forward-mapped plan does not solve the commit task: " + v.message);
    }
    out.cost = v.cost;
    return out;
}

MappingResult backward_map(const CompiledTask& compiled, const Plan& plan_c) {
    require_valid(compiled.task, plan_c, "commit-task plan");

    MappingResult out;
    for (std::size_t k = 0; k < plan_c.size(); ++k) {
        const ActionId cid = plan_c.steps[k];
        if (cid < 0 || static_cast<std::size_t>(cid) >= compiled.provenance.size()) {
            throw CorruptProvenanceError("compiled action " + std::to_string(cid) + " has no provenance record");
        }
        const CompiledAction& prov = compiled.provenance[static_cast<std::size_t>(cid)];
        if (prov.base_action < 0 || static_cast<std::size_t>(prov.base_action) >= compiled.base.actions.size()) {
            throw CorruptProvenanceError("provenance of compiled action " + std::to_string(cid) +
                                         " names unknown base action " + std::to_string(prov.base_action));
        }
        out.plan.steps.push_back(prov.base_action);
        out.steps.push_back({k, k, cid, prov.base_action, prov.variant});
    }

    const PlanValidation v = validate_plan(compiled.base, out.plan);
    if (!v.valid) {
        throw InternalError("backward-mapped plan does not solve the base task: " + v.message);
    }
    out.cost = v.cost;
    return out;
}

std::map<FluentId, std::size_t> commit_achievers(const CompiledTask& compiled, const Plan& plan_c) {
    require_valid(compiled.task, plan_c, "commit-task plan");

    std::map<FluentId, std::size_t> out;
    for (std::size_t k = 0; k < plan_c.size(); ++k) {
        const auto cid = static_cast<std::size_t>(plan_c.steps[k]);
        if (cid >= compiled.provenance.size()) {
            throw CorruptProvenanceError("compiled action " + std::to_string(cid) + " has no provenance record");
        }
        for (FluentId g : compiled.provenance[cid].committed) {
            if (!out.emplace(g, k).second) {
                throw InternalError("goal " + compiled.base.fluent_name(g) + " committed twice");
            }
        }
    }
    for (FluentId g : compiled.pending_goals) {
        if (!out.contains(g)) {
            throw InternalError("pending goal " + compiled.base.fluent_name(g) + " never committed");
        }
    }
    return out;
}

}  // namespace commitplan
