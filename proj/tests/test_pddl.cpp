#include <doctest.h>

#include <algorithm>
#include <map>

#include <json.hpp>

#include "commitplan/compiler.hpp"
#include "commitplan/errors.hpp"
#include "commitplan/pddl.hpp"
#include "commitplan/search.hpp"
#include "commitplan/taskgen.hpp"
#include "support.hpp"

using namespace commitplan;
using testsupport::fixture;
using testsupport::slurp;

namespace {

const char* kTinyDomain = R"(
(define (domain tiny)
  (:requirements :strips)
  (:predicates (done))
  (:action finish
    :parameters ()
    :precondition (and)
    :effect (done)))
)";

const char* kTinyProblem = R"(
(define (problem tiny-1)
  (:domain tiny)
  (:init)
  (:goal (done)))
)";

std::size_t count_prefix(const Task& t, const std::string& prefix) {
    return static_cast<std::size_t>(std::count_if(t.actions.begin(), t.actions.end(), [&](const Action& a) {
        return a.name.rfind(prefix, 0) == 0;
    }));
}

}  // namespace

TEST_CASE("minimal domain") {
    LiftedModel m = parse_pddl(kTinyDomain, kTinyProblem);
    CHECK(m.domain_name == "tiny");
    CHECK(m.schemas.size() == 1);
    Task t = ground(m);
    REQUIRE(t.actions.size() == 1);
    CHECK(t.actions[0].name == "finish");
    CHECK(t.fluents.size() == 1);
    CHECK(t.fluents[0].name == "done");
    CHECK(solve_optimal(t).cost == 1);
}

TEST_CASE("gripper fixture grounds to the recorded counts") {
    auto expected = nlohmann::json::parse(slurp(fixture("gripper.expected.json")));
    LiftedModel m = parse_pddl(slurp(fixture("gripper-domain.pddl")), slurp(fixture("gripper.pddl")));
    CHECK(m.schemas.size() == expected["schemas"].get<std::size_t>());
    Task t = ground(m);
    CHECK(t.actions.size() == expected["ground_actions"].get<std::size_t>());
    for (const auto& [schema, n] : expected["ground_actions_by_schema"].items())
        CHECK(count_prefix(t, schema + "_") == n.get<std::size_t>());
    CHECK(t.fluents.size() == expected["fluents"].get<std::size_t>());
    CHECK(validate_task(t).empty());
    CHECK(t.find_fluent("at_ball1_rooma").has_value());
    CHECK(t.find_action("pick_ball1_rooma_left").has_value());
    CHECK_FALSE(t.find_action("move_rooma_rooma").has_value());

    SearchResult r = solve_optimal(t);
    REQUIRE(r.outcome == Outcome::solved);
    CHECK(r.cost == expected["optimal_cost"].get<Cost>());
}

TEST_CASE("grounding is deterministic") {
    std::string d = slurp(fixture("gripper-domain.pddl"));
    std::string p = slurp(fixture("gripper.pddl"));
    Task a = ground(parse_pddl(d, p));
    Task b = ground(parse_pddl(d, p));
    CHECK(write_json_task(a) == write_json_task(b));
}

TEST_CASE("one-parameter schema over three objects") {
    const char* domain = R"(
(define (domain count)
  (:requirements :strips :typing)
  (:types item)
  (:predicates (seen ?i - item))
  (:action look :parameters (?i - item) :precondition (and) :effect (seen ?i)))
)";
    const char* problem = R"(
(define (problem count-3) (:domain count)
  (:objects a b c - item)
  (:init) (:goal (and (seen a))))
)";
    GroundingOptions keep;
    keep.remove_unachievable_atoms = false;
    CHECK(ground(parse_pddl(domain, problem), keep).actions.size() == 3);
}

TEST_CASE("unsupported requirement is named") {
    std::string d = kTinyDomain;
    d.replace(d.find(":strips"), 7, ":strips :adl");
    try {
        parse_pddl(d, kTinyProblem);
        FAIL("expected an error");
    } catch (const UnsupportedRequirementError& e) {
        CHECK(e.requirement() == ":adl");
        CHECK(e.line() == 3);
    }
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_pddl("(define (domain x)", kTinyProblem), PddlError);
    const char* bad_arity = R"(
(define (domain bad)
  (:requirements :strips)
  (:predicates (p ?x))
  (:action a :parameters (?y) :precondition (p ?y ?y) :effect (p ?y)))
)";
    try {
        parse_pddl(bad_arity, "(define (problem q) (:domain bad) (:init) (:goal (and)))");
        FAIL("expected an arity error");
    } catch (const PddlError& e) {
        CHECK(e.line() == 5);
    }
    const char* bad_type = R"(
(define (domain typed)
  (:requirements :strips :typing)
  (:types room ball)
  (:predicates (at ?b - ball))
  (:action a :parameters (?r - room) :precondition (at ?r) :effect (and)))
)";
    CHECK_THROWS_AS(parse_pddl(bad_type, "(define (problem q) (:domain typed) (:init) (:goal (and)))"), PddlError);
}

TEST_CASE("action costs and negative preconditions") {
    const char* domain = R"(
(define (domain costly)
  (:requirements :strips :negative-preconditions :action-costs)
  (:predicates (a) (b))
  (:functions (total-cost) - number)
  (:action cheap :parameters () :precondition (not (b)) :effect (and (a) (increase (total-cost) 4)))
  (:action plain :parameters () :precondition (a) :effect (b)))
)";
    const char* problem = R"(
(define (problem costly-1) (:domain costly)
  (:init (= (total-cost) 0))
  (:goal (and (b)))
  (:metric minimize (total-cost)))
)";
    Task t = ground(parse_pddl(domain, problem));
    const Action& cheap = t.actions[static_cast<std::size_t>(*t.find_action("cheap"))];
    const Action& plain = t.actions[static_cast<std::size_t>(*t.find_action("plain"))];
    CHECK(cheap.cost == 4);
    CHECK(cheap.pre_neg == FluentSet{*t.find_fluent("b")});
    CHECK(plain.cost == 1);
    CHECK(solve_optimal(t).cost == 5);
}

TEST_CASE("emit worked example compiled task") {
    CompiledTask c = compile(testsupport::worked_example());
    EmittedPddl e = emit_pddl(c.task);
    CHECK(std::count(e.domain.begin(), e.domain.end(), '\n') > 0);
    std::size_t actions = 0;
    for (auto pos = e.domain.find("(:action"); pos != std::string::npos; pos = e.domain.find("(:action", pos + 1))
        ++actions;
    CHECK(actions == 4);
    CHECK(e.problem.find("(:goal (and\n    (x--commit)\n    (y--commit)))") != std::string::npos);
    CHECK(e.domain.find(":negative-preconditions") != std::string::npos);
    CHECK(e.domain.find(":action-costs") == std::string::npos);
}

TEST_CASE("requirements are minimal") {
    EmittedPddl plain = emit_pddl(testsupport::worked_example());
    CHECK(plain.domain.find(":negative-preconditions") == std::string::npos);
    CHECK(plain.domain.find(":action-costs") == std::string::npos);
    CHECK(plain.domain.find("total-cost") == std::string::npos);

    Task costly = testsupport::worked_example();
    costly.actions[1].cost = 2;
    EmittedPddl e = emit_pddl(costly);
    CHECK(e.domain.find(":action-costs") != std::string::npos);
    CHECK(e.problem.find("(:metric minimize (total-cost))") != std::string::npos);
}

TEST_CASE("emit, parse and ground reproduce the task") {
    GenParams params;
    params.cost = {0, 3};
    GroundingOptions keep;
    keep.remove_unachievable_atoms = false;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        params.seed = seed;
        Task t = generate(params);
        EmittedPddl e = emit_pddl(t);
        Task back = ground(parse_pddl(e.domain, e.problem), keep);
        // Fluent order follows declaration order, so ids line up.
        CHECK(back == t);
    }
}

TEST_CASE("names are mangled deterministically and collisions fail") {
    CHECK(mangle_identifier("At Robby") == "at_robby");
    CHECK(mangle_identifier("3rd") == "x3rd");
    CHECK(mangle_identifier("and") == "and_");
    TaskBuilder b;
    b.add_fluent("a b");
    b.add_fluent("a_b");
    CHECK_THROWS_AS(make_naming(b.build()), NameCollisionError);

    TaskBuilder ok;
    ok.add_fluent("Goal Cell");
    ok.add_action("Do It", {}, {}, {"Goal Cell"}, {});
    ok.set_goal({"Goal Cell"});
    Task t = ok.build();
    NamingContext names = make_naming(t);
    CHECK_FALSE(names.identity(t));
    CHECK(make_naming(testsupport::worked_example()).identity(testsupport::worked_example()));
    EmittedPddl e = emit_pddl(t, names);
    GroundingOptions keep;
    keep.remove_unachievable_atoms = false;
    Task back = ground(parse_pddl(e.domain, e.problem), keep);
    CHECK(back.fluents[0].name == "goal_cell");
    Plan p = resolve_plan(t, {"do_it"}, &names);
    CHECK(p.steps == std::vector<ActionId>{0});
}

TEST_CASE("plan files") {
    PlanFile f = parse_plan_file("(a1)\n(a2)\n(a1)\n; cost = 3 (unit cost)");
    CHECK(f.actions == std::vector<std::string>{"a1", "a2", "a1"});
    REQUIRE(f.declared_cost.has_value());
    CHECK(*f.declared_cost == 3);

    PlanFile empty = parse_plan_file("");
    CHECK(empty.actions.empty());
    CHECK_FALSE(empty.declared_cost.has_value());

    try {
        parse_plan_file("a1\n");
        FAIL("expected an error");
    } catch (const PlanFileError& e) {
        CHECK(e.line() == 1);
    }

    PlanFile lifted = parse_plan_file("; comment\n(PICK ball1 rooma left)\n\n(move rooma roomb)\n");
    CHECK(lifted.actions == std::vector<std::string>{"pick_ball1_rooma_left", "move_rooma_roomb"});
}

TEST_CASE("plan file write and read") {
    Task t = testsupport::worked_example();
    Plan p = testsupport::plan_of(t, {"a1", "a2", "a1"});
    std::string text = write_plan_file(t, p);
    CHECK(text == slurp(fixture("worked_example.plan")));
    PlanFile f = parse_plan_file(text);
    CHECK(resolve_plan(t, f.actions) == p);
    CHECK(*f.declared_cost == 3);
    CHECK_THROWS_AS(resolve_plan(t, {"a3"}), InputError);
}
