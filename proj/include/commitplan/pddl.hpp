#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "commitplan/strips.hpp"

namespace commitplan {

// ---------------------------------------------------------------------------
// Lifted PDDL subset: :strips :typing :negative-preconditions :action-costs
// :equality. Identifiers are case-folded to lower case.
// ---------------------------------------------------------------------------

struct Term {
    bool is_variable = false;
    std::string name;  // variables keep their leading '?'

    bool operator==(const Term&) const = default;
};

struct Literal {
    std::string predicate;  // "=" for the built-in equality
    std::vector<Term> args;

    bool operator==(const Literal&) const = default;
};

struct TypedName {
    std::string name;
    std::string type;

    bool operator==(const TypedName&) const = default;
};

struct PredicateDecl {
    std::string name;
    std::vector<TypedName> parameters;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> parameters;
    std::vector<Literal> pre_pos;
    std::vector<Literal> pre_neg;
    std::vector<Literal> add;
    std::vector<Literal> del;
    std::optional<Cost> cost;  // (increase (total-cost) N)
};

struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;

    bool operator==(const GroundAtom&) const = default;
    auto operator<=>(const GroundAtom&) const = default;
};

struct LiftedModel {
    std::string domain_name;
    std::string problem_name;
    std::vector<std::string> requirements;
    std::vector<std::string> types;                    // declaration order, "object" first
    std::map<std::string, std::string> type_parent;    // absent for "object"
    std::vector<TypedName> objects;                    // constants, then problem objects
    std::vector<PredicateDecl> predicates;
    std::vector<ActionSchema> schemas;
    std::vector<GroundAtom> init;
    std::vector<GroundAtom> goal;
    bool minimize_total_cost = false;

    bool is_subtype(const std::string& type, const std::string& ancestor) const;
    const PredicateDecl* find_predicate(std::string_view name) const;
};

// Throws PddlError (line/column), UnsupportedRequirementError.
LiftedModel parse_pddl(std::string_view domain_text, std::string_view problem_text);

struct GroundingOptions {
    // Drop atoms absent from init and every add effect (and actions needing them).
    bool remove_unachievable_atoms = true;
    // Additionally drop actions not applicable in the delete relaxation from init.
    bool prune_relaxed_unreachable = false;
    std::size_t max_ground_actions = 1'000'000;
};

// Canonical ground name of an atom or action: tokens joined by '_'.
std::string ground_name(std::string_view head, const std::vector<std::string>& args);

// Deterministic: schemas in declaration order, substitutions in lexicographic
// order of object names. Throws LimitExceededError above the action cap.
Task ground(const LiftedModel& model, const GroundingOptions& options = {});

// ---------------------------------------------------------------------------
// Grounded PDDL emission
// ---------------------------------------------------------------------------

// Bijection between task names and the identifiers used in emitted PDDL.
struct NamingContext {
    std::vector<std::string> fluent_names;  // by fluent id
    std::vector<std::string> action_names;  // by action id
    std::unordered_map<std::string, ActionId> action_by_emitted;
    std::unordered_map<std::string, FluentId> fluent_by_emitted;
    std::string domain_name = "grounded";
    std::string problem_name = "task";

    // True when every emitted identifier equals the task's own name.
    bool identity(const Task& task) const;
};

// Deterministic mangling into PDDL identifiers. Throws NameCollisionError when
// two names mangle to the same identifier.
std::string mangle_identifier(std::string_view name);
NamingContext make_naming(const Task& task);

struct EmittedPddl {
    std::string domain;
    std::string problem;
};

EmittedPddl emit_pddl(const Task& task, const NamingContext& names);
EmittedPddl emit_pddl(const Task& task);

// ---------------------------------------------------------------------------
// IPC plan files
// ---------------------------------------------------------------------------

struct PlanFile {
    std::vector<std::string> actions;  // normalized names
    std::optional<Cost> declared_cost;
};

// One "(name args...)" per line; ';' lines are comments, "; cost = N" is read
// as the declared cost. Throws PlanFileError with the line number.
PlanFile parse_plan_file(std::string_view text);

// Maps plan-file names onto action ids; names may be task names or the
// emitted identifiers of `names`. Throws InputError for unknown actions.
Plan resolve_plan(const Task& task, const std::vector<std::string>& action_names,
                  const NamingContext* names = nullptr);

std::string write_plan_file(const Task& task, const Plan& plan);

}  // namespace commitplan
