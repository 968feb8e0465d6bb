#include <doctest.h>

#include "commitplan/compiler.hpp"
#include "commitplan/errors.hpp"
#include "commitplan/pddl.hpp"
#include "commitplan/plan_map.hpp"
#include "commitplan/search.hpp"
#include "support.hpp"

using namespace commitplan;
using testsupport::names_of;
using testsupport::plan_of;
using testsupport::worked_example;

TEST_CASE("permanent achievers on the worked example") {
    Task t = worked_example();
    AchievementReport r = permanent_achievers(t, plan_of(t, {"a1", "a2", "a1"}));
    const auto& x = r.of(0);
    const auto& y = r.of(1);
    CHECK(x.achiever == Achiever::at(2));
    CHECK(y.achiever == Achiever::at(1));
    REQUIRE(x.transient.size() == 1);
    CHECK(x.transient[0] == TransientInterval{0, 1});
    CHECK(y.transient.empty());
}

TEST_CASE("monotone plans attribute each goal to its first adder") {
    TaskBuilder b;
    b.add_fluent("p");
    b.add_fluent("q");
    b.add_action("mk-p", {}, {}, {"p"}, {});
    b.add_action("mk-q", {}, {}, {"q"}, {});
    b.set_goal({"p", "q"});
    Task t = b.build();
    AchievementReport r = permanent_achievers(t, plan_of(t, {"mk-q", "mk-p", "mk-q"}));
    CHECK(r.of(0).achiever == Achiever::at(1));
    CHECK(r.of(1).achiever == Achiever::at(0));
    CHECK(r.of(0).transient.empty());
    CHECK(r.of(1).transient.empty());
}

TEST_CASE("initially true goals") {
    TaskBuilder b;
    b.add_fluent("g");
    b.add_fluent("h");
    b.add_action("break", {}, {}, {"h"}, {"g"});
    b.add_action("fix", {}, {}, {"g"}, {});
    b.add_action("mk-h", {}, {}, {"h"}, {});
    b.set_init({"g"});
    b.set_goal({"g", "h"});
    Task t = b.build();

    AchievementReport untouched = permanent_achievers(t, plan_of(t, {"mk-h"}));
    CHECK(untouched.of(0).achiever == Achiever::init());

    // Falsified and restored: the restoring step is the achiever.
    AchievementReport restored = permanent_achievers(t, plan_of(t, {"break", "fix"}));
    CHECK(restored.of(0).achiever == Achiever::at(1));
    CHECK(restored.of(0).transient.empty());
}

TEST_CASE("permanent achievers reject invalid plans") {
    Task t = worked_example();
    CHECK_THROWS_AS(permanent_achievers(t, plan_of(t, {"a1", "a2"})), InvalidPlanError);
}

TEST_CASE("sokoban fixture: the goal cell reached by the first stone belongs to the final push") {
    Task t = testsupport::load_task("sokoban.json");
    PlanFile file = parse_plan_file(testsupport::slurp(testsupport::fixture("sokoban.plan")));
    Plan plan = resolve_plan(t, file.actions);
    auto v = validate_plan(t, plan);
    REQUIRE(v.valid);
    CHECK(v.cost == *file.declared_cost);

    AchievementReport r = permanent_achievers(t, plan);
    const auto& c3 = r.of(*t.find_fluent("filled-c3"));
    const auto& c5 = r.of(*t.find_fluent("filled-c5"));
    CHECK(c3.achiever == Achiever::at(3));
    REQUIRE(c3.transient.size() == 1);
    CHECK(c3.transient[0] == TransientInterval{0, 1});
    CHECK(c5.achiever == Achiever::at(2));
    CHECK(c5.transient.empty());
    CHECK(t.actions[static_cast<std::size_t>(plan.steps[3])].name == "push-blue-t3-u3-c3");

    CompiledTask c = compile(t);
    MappingResult fwd = forward_map(t, plan, c);
    CHECK(fwd.commit_steps.at(*t.find_fluent("filled-c3")) == 3);
    CHECK(fwd.commit_steps.at(*t.find_fluent("filled-c5")) == 2);
    CHECK(commit_achievers(c, fwd.plan) == fwd.commit_steps);

    SearchResult opt = solve_optimal(t);
    REQUIRE(opt.outcome == Outcome::solved);
    CHECK(opt.cost == 4);
    CHECK(solve_optimal(c.task).cost == 4);
}

TEST_CASE("forward map on the worked example") {
    Task t = worked_example();
    CompiledTask c = compile(t);
    MappingResult m = forward_map(t, plan_of(t, {"a1", "a2", "a1"}), c);
    CHECK(names_of(c.task, m.plan) == "a1 a2--sim--y a1--commit--x");
    CHECK(m.cost == 3);
    CHECK(m.commit_steps == std::map<FluentId, std::size_t>{{0, 2}, {1, 1}});
    REQUIRE(m.steps.size() == 3);
    CHECK(m.steps[0].variant == Variant::commit);
    CHECK(m.steps[1].variant == Variant::simultaneous);
    CHECK(m.steps[2].target_action == *c.task.find_action("a1--commit--x"));
}

TEST_CASE("backward map on the worked example") {
    Task t = worked_example();
    CompiledTask c = compile(t);
    MappingResult m = backward_map(c, plan_of(c.task, {"a1", "a2--sim--y", "a1--commit--x"}));
    CHECK(names_of(t, m.plan) == "a1 a2 a1");
    CHECK(m.cost == 3);
}

TEST_CASE("commit achievers on the worked example") {
    Task t = worked_example();
    CompiledTask c = compile(t);
    auto achievers = commit_achievers(c, plan_of(c.task, {"a1", "a2--sim--y", "a1--commit--x"}));
    CHECK(achievers == std::map<FluentId, std::size_t>{{0, 2}, {1, 1}});
}

TEST_CASE("tasks without pending goals map identically") {
    Task t = worked_example();
    t.init = State(2, std::vector<FluentId>{0, 1});
    CompiledTask c = compile(t);
    Plan p = plan_of(t, {"a2", "a1"});
    MappingResult fwd = forward_map(t, p, c);
    CHECK(fwd.plan == p);
    CHECK(fwd.commit_steps.empty());
    CHECK(backward_map(c, p).plan == p);
    CHECK(commit_achievers(c, p).empty());
}

TEST_CASE("mapping errors") {
    Task t = worked_example();
    CompiledTask c = compile(t);
    CHECK_THROWS_AS(forward_map(t, plan_of(t, {"a1"}), c), InvalidPlanError);
    CHECK_THROWS_AS(backward_map(c, plan_of(c.task, {"a1"})), InvalidPlanError);

    CompiledTask corrupt = c;
    corrupt.provenance.pop_back();
    CHECK_THROWS_AS(backward_map(corrupt, plan_of(c.task, {"a1", "a2--sim--y", "a1--commit--x"})),
                    CorruptProvenanceError);
}

TEST_CASE("commit indices never precede permanence") {
    Task t = worked_example();
    CompiledTask c = compile(t);
    SearchResult r = solve_greedy(c.task);
    REQUIRE(r.outcome == Outcome::solved);
    MappingResult back = backward_map(c, *r.plan);
    AchievementReport perm = permanent_achievers(t, back.plan);
    for (auto [g, k] : commit_achievers(c, *r.plan)) {
        CHECK(k >= perm.of(g).achiever.step);
    }
}
