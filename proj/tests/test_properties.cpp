#include <doctest.h>

#include "commitplan/compiler.hpp"
#include "commitplan/errors.hpp"
#include "commitplan/plan_map.hpp"
#include "commitplan/search.hpp"
#include "commitplan/taskgen.hpp"

using namespace commitplan;

namespace {

// Wider effects and zero costs than the generator defaults.
GenParams stress_params(std::uint64_t seed) {
    GenParams p;
    p.seed = seed;
    p.fluents = {2, 7};
    p.actions = {1, 7};
    p.max_add = 3;
    p.goal_size = {1, 3};
    p.cost = {0, 2};
    return p;
}

}  // namespace

TEST_CASE("compiled variants preserve cost and keep the empty subset conservative") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Task t = generate(stress_params(seed));
        CompiledTask c = compile(t);
        for (std::size_t i = 0; i < c.task.actions.size(); ++i) {
            const Action& a = c.task.actions[i];
            const CompiledAction& p = c.provenance[i];
            const Action& base = t.actions[static_cast<std::size_t>(p.base_action)];
            CHECK(a.cost == base.cost);
            CHECK(a.pre_pos == base.pre_pos);
            CHECK(a.del == base.del);
            CHECK(set_intersection(p.committed, set_intersection(base.add, c.pending_goals)) == p.committed);
            if (p.variant == Variant::forcecommit || p.variant == Variant::unchanged) CHECK(p.committed.empty());
            if (p.variant == Variant::commit && p.committed.empty()) {
                Action same = base;
                same.id = a.id;
                CHECK(a == same);
            }
            if (p.variant == Variant::simultaneous && p.committed.empty()) {
                CHECK(a.add == base.add);
                for (FluentId f : a.pre_neg)
                    if (!contains(base.pre_neg, f)) CHECK(c.commit_map.goal(f) >= 0);
            }
            // No compiled action deletes a commit fluent.
            for (FluentId cf : c.commit_map.commit_of) CHECK_FALSE(contains(a.del, cf));
        }
        for (std::size_t b = 0; b < t.actions.size(); ++b) CHECK(c.variants_of(static_cast<ActionId>(b)).size() >= 1);
    }
}

TEST_CASE("size formula holds under wider effects") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Task t = generate(stress_params(seed));
        CompiledTask c = compile(t);
        std::uint64_t expected = 0;
        for (const Action& a : t.actions) {
            GoalClass k = classify_action(a, c.pending_goals);
            if (k == GoalClass::add_only || k == GoalClass::add_and_del)
                expected += std::uint64_t{1} << set_intersection(a.add, c.pending_goals).size();
            else
                ++expected;
        }
        CHECK(c.task.actions.size() == expected);
        CHECK(forecast_size(t).compiled_action_count == expected);
    }
}

TEST_CASE("commit fluents imply their goals in every reachable state") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        CompiledTask c = compile(generate(stress_params(seed)));
        for (const State& s : enumerate_reachable(c.task, 200000))
            for (std::size_t i = 0; i < c.commit_map.goals.size(); ++i)
                if (s.test(c.commit_map.commit_of[i])) CHECK(s.test(c.commit_map.goals[i]));
    }
}

TEST_CASE("solvability, optimal cost and mappings agree with zero-cost actions") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Task t = generate(stress_params(seed));
        CompiledTask c = compile(t);
        SearchResult base = solve_optimal(t, {}, OptimalHeuristic::blind);
        SearchResult comp = solve_optimal(c.task, {}, OptimalHeuristic::blind);
        REQUIRE(base.outcome != Outcome::limit);
        CHECK(base.outcome == comp.outcome);
        if (base.outcome != Outcome::solved) continue;
        CHECK(base.cost == comp.cost);

        MappingResult fwd = forward_map(t, *base.plan, c);
        CHECK(fwd.cost == base.cost);
        CHECK(fwd.plan.size() == base.plan->size());
        MappingResult back = backward_map(c, fwd.plan);
        CHECK(back.plan == *base.plan);

        MappingResult from_comp = backward_map(c, *comp.plan);
        CHECK(from_comp.cost == comp.cost);

        AchievementReport perm = permanent_achievers(t, *base.plan);
        for (auto [g, k] : commit_achievers(c, fwd.plan)) CHECK(perm.of(g).achiever == Achiever::at(k));
    }
}

TEST_CASE("achievers hold from their step to the end of the plan") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Task t = generate(stress_params(seed));
        SearchResult r = solve_greedy(t);
        if (r.outcome != Outcome::solved) continue;
        PlanValidation v = validate_plan(t, *r.plan);
        REQUIRE(v.valid);
        for (const auto& g : permanent_achievers(t, *r.plan).goals) {
            std::size_t from = g.achiever.initial ? 0 : g.achiever.step + 1;
            for (std::size_t i = from; i < v.trace.states.size(); ++i) CHECK(v.trace.states[i].test(g.goal));
            if (!g.achiever.initial) CHECK_FALSE(v.trace.states[g.achiever.step].test(g.goal));
            for (const auto& iv : g.transient) {
                CHECK(iv.added_at < iv.deleted_at);
                CHECK(v.trace.states[iv.added_at + 1].test(g.goal));
                CHECK_FALSE(v.trace.states[iv.deleted_at + 1].test(g.goal));
            }
        }
    }
}
