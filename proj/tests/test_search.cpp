#include <doctest.h>

#include <algorithm>

#include "commitplan/compiler.hpp"
#include "commitplan/errors.hpp"
#include "commitplan/search.hpp"
#include "commitplan/taskgen.hpp"
#include "support.hpp"

using namespace commitplan;
using testsupport::worked_example;

TEST_CASE("optimal search on the worked example") {
    Task t = worked_example();
    for (auto h : {OptimalHeuristic::blind, OptimalHeuristic::h_max}) {
        SearchResult r = solve_optimal(t, {}, h);
        REQUIRE(r.outcome == Outcome::solved);
        CHECK(r.cost == 3);
        CHECK(testsupport::names_of(t, *r.plan) == "a1 a2 a1");
        CHECK(validate_plan(t, *r.plan).valid);
    }
    CompiledTask c = compile(t);
    SearchResult rc = solve_optimal(c.task);
    REQUIRE(rc.outcome == Outcome::solved);
    CHECK(rc.cost == 3);
}

TEST_CASE("goal without an adder is unsolvable") {
    TaskBuilder b;
    b.add_fluent("g");
    b.add_fluent("p");
    b.add_action("make-p", {}, {}, {"p"}, {});
    b.set_goal({"g"});
    Task t = b.build();
    CHECK(solve_optimal(t).outcome == Outcome::unsolvable);
    CHECK(solve_optimal(t, {}, OptimalHeuristic::blind).outcome == Outcome::unsolvable);
    CHECK(solve_greedy(t).outcome == Outcome::unsolvable);
}

TEST_CASE("unsolvable by negative preconditions only") {
    TaskBuilder b;
    b.add_fluent("block");
    b.add_fluent("g");
    b.add_action("make", {}, {"block"}, {"g"}, {});
    b.set_init({"block"});
    b.set_goal({"g"});
    Task t = b.build();
    // The relaxation ignores negative preconditions, so h_max is finite here.
    CHECK(h_max(t.init, t) == 1);
    CHECK(solve_optimal(t).outcome == Outcome::unsolvable);
}

TEST_CASE("greedy search") {
    Task t = worked_example();
    SearchResult r = solve_greedy(t);
    REQUIRE(r.outcome == Outcome::solved);
    CHECK(r.cost >= 3);
    CHECK(validate_plan(t, *r.plan).valid);

    CompiledTask c = compile(t);
    SearchResult rc = solve_greedy(c.task);
    REQUIRE(rc.outcome == Outcome::solved);
    auto v = validate_plan(c.task, *rc.plan);
    CHECK(v.valid);
    for (FluentId cf : c.commit_map.commit_of) CHECK(v.trace.final_state().test(cf));

    Task trivial = t;
    trivial.init = State(2, std::vector<FluentId>{0, 1});
    SearchResult rt = solve_greedy(trivial);
    CHECK(rt.outcome == Outcome::solved);
    CHECK(rt.plan->empty());
}

TEST_CASE("relaxed heuristics") {
    Task t = worked_example();
    CHECK(h_max(t.init, t) == 2);
    CHECK(h_add(t.init, t) == 3);
    State goal(2, std::vector<FluentId>{0, 1});
    CHECK(h_max(goal, t) == 0);
    CHECK(h_add(goal, t) == 0);

    TaskBuilder b;
    b.add_fluent("g");
    b.set_goal({"g"});
    Task dead = b.build();
    CHECK(h_max(dead.init, dead) == kInfiniteCost);
    CHECK(h_add(dead.init, dead) == kInfiniteCost);
}

TEST_CASE("h_add dominates h_max and both vanish on goal states") {
    GenParams params;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        params.seed = seed;
        Task t = generate(params);
        RelaxedExploration rx(t);
        for (const State& s : enumerate_reachable(t, 1000)) {
            Cost hm = rx.h_max(s);
            Cost ha = rx.h_add(s);
            CHECK(ha >= hm);
            CHECK((hm == kInfiniteCost) == (ha == kInfiniteCost));
            if (t.is_goal(s)) CHECK(hm == 0);
        }
    }
}

TEST_CASE("h_max is admissible on reachable states") {
    GenParams params;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        params.seed = seed;
        Task t = generate(params);
        for (const State& s : enumerate_reachable(t, 1000)) {
            Task from = t;
            from.init = s;
            SearchResult r = solve_optimal(from, {}, OptimalHeuristic::blind);
            Cost h = h_max(s, t);
            if (r.outcome == Outcome::solved) CHECK(h <= r.cost);
        }
    }
}

TEST_CASE("h_max agrees with blind search on optimal cost") {
    GenParams params;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        params.seed = seed;
        Task t = generate(params);
        SearchResult blind = solve_optimal(t, {}, OptimalHeuristic::blind);
        SearchResult hm = solve_optimal(t);
        REQUIRE(blind.outcome == hm.outcome);
        if (blind.outcome == Outcome::solved) CHECK(blind.cost == hm.cost);
    }
}

TEST_CASE("search is deterministic") {
    GenParams params;
    params.seed = 11;
    params.fluents = {8, 8};
    params.actions = {8, 8};
    Task t = generate(params);
    SearchResult a = solve_optimal(t);
    SearchResult b = solve_optimal(t);
    CHECK(a.outcome == b.outcome);
    CHECK(a.plan == b.plan);
    CHECK(a.stats.expansions == b.stats.expansions);
    CHECK(a.stats.generations == b.stats.generations);
    SearchResult g1 = solve_greedy(t);
    SearchResult g2 = solve_greedy(t);
    CHECK(g1.plan == g2.plan);
}

TEST_CASE("zero-cost actions keep optimality") {
    TaskBuilder b;
    b.add_fluent("s");
    b.add_fluent("m");
    b.add_fluent("g");
    b.add_action("free-step", {"s"}, {}, {"m"}, {"s"}, 0);
    b.add_action("direct", {"s"}, {}, {"g"}, {}, 5);
    b.add_action("finish", {"m"}, {}, {"g"}, {}, 2);
    b.set_init({"s"});
    b.set_goal({"g"});
    Task t = b.build();
    SearchResult r = solve_optimal(t);
    REQUIRE(r.outcome == Outcome::solved);
    CHECK(r.cost == 2);
}

TEST_CASE("limits") {
    TaskBuilder b;
    std::vector<std::string> names;
    for (int i = 0; i < 14; ++i) {
        names.push_back("f" + std::to_string(i));
        b.add_fluent(names.back());
        b.add_action("set" + std::to_string(i), {}, {}, {names.back()}, {});
    }
    b.add_fluent("done");
    b.add_action("finish", names, {}, {"done"}, {});
    b.set_goal({"done"});
    Task t = b.build();

    SearchResult mem = solve_optimal(t, SearchLimits{std::nullopt, 100, std::nullopt}, OptimalHeuristic::blind);
    CHECK(mem.outcome == Outcome::limit);
    CHECK(mem.limit == LimitKind::memory);
    CHECK_FALSE(mem.plan.has_value());

    SearchResult exp = solve_optimal(t, SearchLimits{std::nullopt, std::nullopt, 10}, OptimalHeuristic::blind);
    CHECK(exp.outcome == Outcome::limit);
    CHECK(exp.limit == LimitKind::expansions);
    CHECK(exp.stats.expansions == 10);

    SearchResult time = solve_optimal(t, SearchLimits{1e-12, std::nullopt, std::nullopt}, OptimalHeuristic::blind);
    CHECK(time.outcome == Outcome::limit);
    CHECK(time.limit == LimitKind::time);

    SearchResult ok = solve_optimal(t);
    REQUIRE(ok.outcome == Outcome::solved);
    CHECK(ok.cost == 15);
}

TEST_CASE("enumerate_reachable") {
    Task t = worked_example();
    auto states = enumerate_reachable(t, 100);
    CHECK(states.size() == 4);
    CHECK(states[0] == State(2));
    CHECK(states[1] == State(2, std::vector<FluentId>{0}));
    CHECK(states[2] == State(2, std::vector<FluentId>{1}));
    CHECK(states[3] == State(2, std::vector<FluentId>{0, 1}));
    CHECK_THROWS_AS(enumerate_reachable(t, 3), LimitExceededError);

    TaskBuilder b;
    b.add_fluent("p");
    b.add_action("never", {"p"}, {}, {}, {"p"});
    Task stuck = b.build();
    CHECK(enumerate_reachable(stuck, 10).size() == 1);
}

TEST_CASE("compiled worked example satisfies commit safety") {
    CompiledTask c = compile(worked_example());
    for (const State& s : enumerate_reachable(c.task, 100))
        for (std::size_t i = 0; i < c.commit_map.goals.size(); ++i)
            if (s.test(c.commit_map.commit_of[i])) CHECK(s.test(c.commit_map.goals[i]));
}
