#include "commitplan/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_set>

#include "commitplan/errors.hpp"

namespace commitplan {

namespace {

// ---------------------------------------------------------------------------
// S-expressions
// ---------------------------------------------------------------------------

struct SExpr {
    bool is_list = false;
    std::string atom;
    std::vector<SExpr> items;
    std::size_t line = 1;
    std::size_t column = 1;

    bool is_atom() const { return !is_list; }
    bool is_atom(std::string_view s) const { return !is_list && atom == s; }
    // Head keyword of a list, or "".
    std::string_view head() const {
        if (is_list && !items.empty() && items.front().is_atom()) {
            return items.front().atom;
        }
        return {};
    }
};

[[noreturn]] void fail(const SExpr& at, const std::string& msg) { throw PddlError(msg, at.line, at.column); }

class SExprReader {
public:
    explicit SExprReader(std::string_view text) : text_(text) {}

    SExpr read_document() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw PddlError("empty input", line_, col_);
        }
        SExpr e = read();
        skip_space();
        if (pos_ < text_.size()) {
            throw PddlError("unexpected content after the top-level expression", line_, col_);
        }
        return e;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    SExpr read() {
        skip_space();
        if (pos_ >= text_.size()) {
            throw PddlError("unexpected end of input (missing ')')", line_, col_);
        }
        SExpr e;
        e.line = line_;
        e.column = col_;
        char c = text_[pos_];
        if (c == ')') {
            throw PddlError("unexpected ')'", line_, col_);
        }
        if (c == '(') {
            e.is_list = true;
            advance();
            while (true) {
                skip_space();
                if (pos_ >= text_.size()) {
                    throw PddlError("unexpected end of input (missing ')')", line_, col_);
                }
                if (text_[pos_] == ')') {
                    advance();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        while (pos_ < text_.size()) {
            c = text_[pos_];
            if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
                break;
            }
            e.atom.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
            advance();
        }
        return e;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

const std::set<std::string, std::less<>> kSupportedRequirements = {
    ":strips", ":typing", ":negative-preconditions", ":action-costs", ":equality"};

const SExpr& expect_atom(const SExpr& e, const char* what) {
    if (!e.is_atom()) {
        fail(e, std::string("expected ") + what);
    }
    return e;
}

const SExpr& expect_list(const SExpr& e, const char* what) {
    if (!e.is_list) {
        fail(e, std::string("expected ") + what);
    }
    return e;
}

// ---------------------------------------------------------------------------
// Model building
// ---------------------------------------------------------------------------

class ModelParser {
public:
    LiftedModel parse(std::string_view domain_text, std::string_view problem_text) {
        model_.types.push_back("object");
        parse_domain(SExprReader(domain_text).read_document());
        parse_problem(SExprReader(problem_text).read_document());
        return std::move(model_);
    }

private:
    void require_typed_object_type(const SExpr& at, const std::string& type) {
        if (std::find(model_.types.begin(), model_.types.end(), type) == model_.types.end()) {
            fail(at, "unknown type " + type);
        }
    }

    // a b - t c - u d  ->  (a t) (b t) (c u) (d object)
    std::vector<std::pair<TypedName, const SExpr*>> typed_list(const SExpr& list, std::size_t first, bool variables) {
        std::vector<std::pair<TypedName, const SExpr*>> out;
        std::size_t pending = 0;
        for (std::size_t i = first; i < list.items.size(); ++i) {
            const SExpr& item = list.items[i];
            if (item.is_atom("-")) {
                if (i + 1 >= list.items.size()) {
                    fail(item, "missing type after '-'");
                }
                const SExpr& type = list.items[++i];
                if (type.is_list) {
                    if (type.head() == "either") {
                        fail(type, "either-types are not supported");
                    }
                    fail(type, "expected a type name");
                }
                for (std::size_t k = out.size() - pending; k < out.size(); ++k) {
                    out[k].first.type = type.atom;
                }
                if (pending == 0) {
                    fail(item, "'-' without preceding names");
                }
                pending = 0;
                continue;
            }
            expect_atom(item, variables ? "a variable" : "a name");
            if (variables != (!item.atom.empty() && item.atom.front() == '?')) {
                fail(item, variables ? "expected a variable, got " + item.atom
                                     : "expected a name, got variable " + item.atom);
            }
            out.push_back({{item.atom, "object"}, &item});
            ++pending;
        }
        return out;
    }

    void parse_requirements(const SExpr& section) {
        for (std::size_t i = 1; i < section.items.size(); ++i) {
            const SExpr& r = expect_atom(section.items[i], "a requirement flag");
            if (!kSupportedRequirements.contains(r.atom)) {
                throw UnsupportedRequirementError(r.atom, r.line, r.column);
            }
            if (std::find(model_.requirements.begin(), model_.requirements.end(), r.atom) ==
                model_.requirements.end()) {
                model_.requirements.push_back(r.atom);
            }
        }
    }

    void declare_type(const std::string& name, const std::string& parent) {
        if (std::find(model_.types.begin(), model_.types.end(), name) == model_.types.end()) {
            model_.types.push_back(name);
        }
        if (name != "object") {
            model_.type_parent[name] = parent;
        }
    }

    void parse_types(const SExpr& section) {
        for (auto& [tn, at] : typed_list(section, 1, false)) {
            if (tn.name == "object") {
                continue;
            }
            if (tn.type != "object" &&
                std::find(model_.types.begin(), model_.types.end(), tn.type) == model_.types.end()) {
                declare_type(tn.type, "object");
            }
            declare_type(tn.name, tn.type);
        }
        // Reject cycles.
        for (const auto& t : model_.types) {
            std::string cur = t;
            for (std::size_t steps = 0; cur != "object"; ++steps) {
                if (steps > model_.types.size()) {
                    fail(section, "cyclic type hierarchy at " + t);
                }
                cur = model_.type_parent.at(cur);
            }
        }
    }

    void add_objects(const SExpr& section) {
        for (auto& [tn, at] : typed_list(section, 1, false)) {
            require_typed_object_type(*at, tn.type);
            for (const auto& o : model_.objects) {
                if (o.name == tn.name) {
                    fail(*at, "duplicate object " + tn.name);
                }
            }
            model_.objects.push_back(tn);
        }
    }

    void parse_predicates(const SExpr& section) {
        for (std::size_t i = 1; i < section.items.size(); ++i) {
            const SExpr& p = expect_list(section.items[i], "a predicate declaration");
            if (p.items.empty()) {
                fail(p, "empty predicate declaration");
            }
            PredicateDecl decl;
            decl.name = expect_atom(p.items[0], "a predicate name").atom;
            if (model_.find_predicate(decl.name)) {
                fail(p, "duplicate predicate " + decl.name);
            }
            for (auto& [tn, at] : typed_list(p, 1, true)) {
                require_typed_object_type(*at, tn.type);
                decl.parameters.push_back(tn);
            }
            model_.predicates.push_back(std::move(decl));
        }
    }

    void parse_functions(const SExpr& section) {
        for (std::size_t i = 1; i < section.items.size(); ++i) {
            const SExpr& f = section.items[i];
            if (f.is_atom("-") && i + 1 < section.items.size() && section.items[i + 1].is_atom("number")) {
                ++i;
                continue;
            }
            if (!f.is_list || f.head() != "total-cost" || f.items.size() != 1) {
                fail(f, "only the (total-cost) function is supported");
            }
        }
    }

    struct Scope {
        const std::vector<TypedName>* parameters = nullptr;
        bool ground = false;  // problem level: only objects allowed
    };

    std::string type_of(const Term& t) const {
        for (const auto& o : model_.objects) {
            if (o.name == t.name) {
                return o.type;
            }
        }
        return {};
    }

    Literal literal(const SExpr& e, const Scope& scope) {
        expect_list(e, "a literal");
        if (e.items.empty()) {
            fail(e, "empty literal");
        }
        Literal lit;
        lit.predicate = expect_atom(e.items[0], "a predicate name").atom;
        std::vector<std::string> arg_types;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            const SExpr& a = expect_atom(e.items[i], "a term");
            Term t{!a.atom.empty() && a.atom.front() == '?', a.atom};
            std::string type;
            if (t.is_variable) {
                if (scope.ground || scope.parameters == nullptr) {
                    fail(a, "variable " + t.name + " not allowed here");
                }
                auto it = std::find_if(scope.parameters->begin(), scope.parameters->end(),
                                       [&](const TypedName& p) { return p.name == t.name; });
                if (it == scope.parameters->end()) {
                    fail(a, "unknown variable " + t.name);
                }
                type = it->type;
            } else {
                type = type_of(t);
                if (type.empty()) {
                    fail(a, "unknown object " + t.name);
                }
            }
            lit.args.push_back(std::move(t));
            arg_types.push_back(std::move(type));
        }

        if (lit.predicate == "=") {
            if (lit.args.size() != 2) {
                fail(e, "equality takes exactly two arguments");
            }
            return lit;
        }
        const PredicateDecl* decl = model_.find_predicate(lit.predicate);
        if (decl == nullptr) {
            fail(e, "unknown predicate " + lit.predicate);
        }
        if (decl->parameters.size() != lit.args.size()) {
            fail(e, "predicate " + lit.predicate + " expects " + std::to_string(decl->parameters.size()) +
                        " arguments, got " + std::to_string(lit.args.size()));
        }
        for (std::size_t i = 0; i < lit.args.size(); ++i) {
            if (!model_.is_subtype(arg_types[i], decl->parameters[i].type)) {
                fail(e.items[i + 1], "type mismatch: " + lit.args[i].name + " is " + arg_types[i] + ", " +
                                         lit.predicate + " expects " + decl->parameters[i].type);
            }
        }
        return lit;
    }

    void condition(const SExpr& e, const Scope& scope, std::vector<Literal>& pos, std::vector<Literal>& neg) {
        expect_list(e, "a condition");
        if (e.items.empty()) {
            return;
        }
        auto h = e.head();
        if (h == "and") {
            for (std::size_t i = 1; i < e.items.size(); ++i) {
                condition(e.items[i], scope, pos, neg);
            }
        } else if (h == "not") {
            if (e.items.size() != 2) {
                fail(e, "not takes exactly one argument");
            }
            const SExpr& inner = expect_list(e.items[1], "a literal");
            if (inner.head() == "and" || inner.head() == "not" || inner.head() == "or") {
                fail(inner, "only literals may be negated");
            }
            neg.push_back(literal(inner, scope));
        } else if (h == "or" || h == "imply" || h == "exists" || h == "forall" || h == "when") {
            fail(e, "unsupported condition " + std::string(h));
        } else {
            pos.push_back(literal(e, scope));
        }
    }

    void effect(const SExpr& e, const Scope& scope, ActionSchema& schema) {
        expect_list(e, "an effect");
        if (e.items.empty()) {
            return;
        }
        auto h = e.head();
        if (h == "and") {
            for (std::size_t i = 1; i < e.items.size(); ++i) {
                effect(e.items[i], scope, schema);
            }
        } else if (h == "not") {
            if (e.items.size() != 2) {
                fail(e, "not takes exactly one argument");
            }
            Literal lit = literal(expect_list(e.items[1], "a literal"), scope);
            if (lit.predicate == "=") {
                fail(e, "equality cannot be an effect");
            }
            schema.del.push_back(std::move(lit));
        } else if (h == "increase") {
            if (e.items.size() != 3 || e.items[1].head() != "total-cost" || e.items[1].items.size() != 1) {
                fail(e, "only (increase (total-cost) N) is supported");
            }
            const SExpr& amount = e.items[2];
            if (!amount.is_atom()) {
                fail(amount, "action cost must be a non-negative integer constant");
            }
            Cost value = 0;
            auto [ptr, ec] = std::from_chars(amount.atom.data(), amount.atom.data() + amount.atom.size(), value);
            if (ec != std::errc{} || ptr != amount.atom.data() + amount.atom.size() || value < 0) {
                fail(amount, "action cost must be a non-negative integer constant");
            }
            schema.cost = schema.cost.value_or(0) + value;
        } else if (h == "forall" || h == "when" || h == "decrease" || h == "assign") {
            fail(e, "unsupported effect " + std::string(h));
        } else {
            Literal lit = literal(e, scope);
            if (lit.predicate == "=") {
                fail(e, "equality cannot be an effect");
            }
            schema.add.push_back(std::move(lit));
        }
    }

    void parse_action(const SExpr& section) {
        if (section.items.size() < 2) {
            fail(section, "action without a name");
        }
        ActionSchema schema;
        schema.name = expect_atom(section.items[1], "an action name").atom;
        for (const auto& s : model_.schemas) {
            if (s.name == schema.name) {
                fail(section.items[1], "duplicate action " + schema.name);
            }
        }
        const SExpr* pre = nullptr;
        const SExpr* eff = nullptr;
        for (std::size_t i = 2; i < section.items.size(); i += 2) {
            const SExpr& key = expect_atom(section.items[i], "an action keyword");
            if (i + 1 >= section.items.size()) {
                fail(key, "missing value for " + key.atom);
            }
            const SExpr& value = section.items[i + 1];
            if (key.atom == ":parameters") {
                for (auto& [tn, at] : typed_list(expect_list(value, "a parameter list"), 0, true)) {
                    require_typed_object_type(*at, tn.type);
                    schema.parameters.push_back(tn);
                }
            } else if (key.atom == ":precondition") {
                pre = &value;
            } else if (key.atom == ":effect") {
                eff = &value;
            } else {
                fail(key, "unsupported action keyword " + key.atom);
            }
        }
        Scope scope{&schema.parameters, false};
        if (pre != nullptr) {
            condition(*pre, scope, schema.pre_pos, schema.pre_neg);
        }
        if (eff != nullptr) {
            effect(*eff, scope, schema);
        }
        model_.schemas.push_back(std::move(schema));
    }

    void parse_domain(const SExpr& root) {
        if (root.head() != "define" || root.items.size() < 2 || root.items[1].head() != "domain" ||
            root.items[1].items.size() != 2) {
            fail(root, "expected (define (domain NAME) ...)");
        }
        model_.domain_name = expect_atom(root.items[1].items[1], "a domain name").atom;
        for (std::size_t i = 2; i < root.items.size(); ++i) {
            const SExpr& section = expect_list(root.items[i], "a domain section");
            auto h = section.head();
            if (h == ":requirements") {
                parse_requirements(section);
            } else if (h == ":types") {
                parse_types(section);
            } else if (h == ":constants") {
                add_objects(section);
            } else if (h == ":predicates") {
                parse_predicates(section);
            } else if (h == ":functions") {
                parse_functions(section);
            } else if (h == ":action") {
                parse_action(section);
            } else {
                fail(section, "unsupported domain section " + std::string(h));
            }
        }
    }

    GroundAtom ground_atom(const SExpr& e) {
        Literal lit = literal(e, Scope{nullptr, true});
        if (lit.predicate == "=") {
            fail(e, "equality atoms are not allowed here");
        }
        GroundAtom atom{lit.predicate, {}};
        for (auto& t : lit.args) {
            atom.args.push_back(std::move(t.name));
        }
        return atom;
    }

    void parse_goal(const SExpr& e) {
        expect_list(e, "a goal");
        if (e.items.empty()) {
            return;
        }
        auto h = e.head();
        if (h == "and") {
            for (std::size_t i = 1; i < e.items.size(); ++i) {
                parse_goal(e.items[i]);
            }
        } else if (h == "not" || h == "or" || h == "imply" || h == "exists" || h == "forall") {
            fail(e, "goals must be conjunctions of positive atoms");
        } else {
            model_.goal.push_back(ground_atom(e));
        }
    }

    void parse_problem(const SExpr& root) {
        if (root.head() != "define" || root.items.size() < 2 || root.items[1].head() != "problem" ||
            root.items[1].items.size() != 2) {
            fail(root, "expected (define (problem NAME) ...)");
        }
        model_.problem_name = expect_atom(root.items[1].items[1], "a problem name").atom;
        for (std::size_t i = 2; i < root.items.size(); ++i) {
            const SExpr& section = expect_list(root.items[i], "a problem section");
            auto h = section.head();
            if (h == ":domain") {
                continue;
            } else if (h == ":requirements") {
                parse_requirements(section);
            } else if (h == ":objects") {
                add_objects(section);
            } else if (h == ":init") {
                for (std::size_t k = 1; k < section.items.size(); ++k) {
                    const SExpr& a = expect_list(section.items[k], "an initial atom");
                    if (a.head() == "=") {
                        if (a.items.size() != 3 || a.items[1].head() != "total-cost") {
                            fail(a, "only (= (total-cost) N) is supported in :init");
                        }
                        continue;
                    }
                    model_.init.push_back(ground_atom(a));
                }
            } else if (h == ":goal") {
                if (section.items.size() != 2) {
                    fail(section, ":goal takes exactly one formula");
                }
                parse_goal(section.items[1]);
            } else if (h == ":metric") {
                if (section.items.size() != 3 || !section.items[1].is_atom("minimize") ||
                    section.items[2].head() != "total-cost") {
                    fail(section, "only (:metric minimize (total-cost)) is supported");
                }
                model_.minimize_total_cost = true;
            } else {
                fail(section, "unsupported problem section " + std::string(h));
            }
        }
    }

    LiftedModel model_;
};

}  // namespace

bool LiftedModel::is_subtype(const std::string& type, const std::string& ancestor) const {
    std::string cur = type;
    for (std::size_t guard = 0; guard <= types.size(); ++guard) {
        if (cur == ancestor) {
            return true;
        }
        auto it = type_parent.find(cur);
        if (it == type_parent.end()) {
            return false;
        }
        cur = it->second;
    }
    return false;
}

const PredicateDecl* LiftedModel::find_predicate(std::string_view name) const {
    for (const auto& p : predicates) {
        if (p.name == name) {
            return &p;
        }
    }
    return nullptr;
}

LiftedModel parse_pddl(std::string_view domain_text, std::string_view problem_text) {
    return ModelParser().parse(domain_text, problem_text);
}

// ---------------------------------------------------------------------------
// Grounding
// ---------------------------------------------------------------------------

std::string ground_name(std::string_view head, const std::vector<std::string>& args) {
    std::string out(head);
    for (const auto& a : args) {
        out += '_';
        out += a;
    }
    return out;
}

namespace {

struct GroundActionDraft {
    std::string name;
    std::vector<int> pre_pos, pre_neg, add, del;  // atom indices
    Cost cost = 1;
};

class Grounder {
public:
    Grounder(const LiftedModel& model, const GroundingOptions& options) : model_(model), options_(options) {}

    Task run() {
        for (std::size_t i = 0; i < model_.predicates.size(); ++i) {
            predicate_index_[model_.predicates[i].name] = i;
        }
        std::unordered_set<std::string> dynamic;
        for (const auto& s : model_.schemas) {
            for (const auto& l : s.add) dynamic.insert(l.predicate);
            for (const auto& l : s.del) dynamic.insert(l.predicate);
        }
        for (const auto& p : model_.predicates) {
            if (!dynamic.contains(p.name)) {
                static_.insert(p.name);
            }
        }
        std::set<GroundAtom> init_set(model_.init.begin(), model_.init.end());
        init_atoms_ = std::move(init_set);

        for (const auto& s : model_.schemas) {
            ground_schema(s);
        }
        return assemble();
    }

private:
    int atom_id(GroundAtom atom) {
        auto [it, inserted] = atom_index_.emplace(std::move(atom), static_cast<int>(atoms_.size()));
        if (inserted) {
            atoms_.push_back(it->first);
        }
        return it->second;
    }

    std::vector<std::string> objects_of(const std::string& type) const {
        std::vector<std::string> out;
        for (const auto& o : model_.objects) {
            if (model_.is_subtype(o.type, type)) {
                out.push_back(o.name);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    static std::string resolve(const Term& t, const std::vector<TypedName>& params,
                               const std::vector<std::string>& binding) {
        if (!t.is_variable) {
            return t.name;
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i].name == t.name) {
                return binding[i];
            }
        }
        return {};
    }

    GroundAtom instantiate(const Literal& l, const std::vector<TypedName>& params,
                           const std::vector<std::string>& binding) const {
        GroundAtom a{l.predicate, {}};
        for (const auto& t : l.args) {
            a.args.push_back(resolve(t, params, binding));
        }
        return a;
    }

    // Deepest parameter index a literal depends on, or -1 for ground literals.
    static int ready_depth(const Literal& l, const std::vector<TypedName>& params) {
        int depth = -1;
        for (const auto& t : l.args) {
            if (!t.is_variable) continue;
            for (std::size_t i = 0; i < params.size(); ++i) {
                if (params[i].name == t.name) {
                    depth = std::max(depth, static_cast<int>(i));
                }
            }
        }
        return depth;
    }

    void ground_schema(const ActionSchema& s) {
        const std::size_t k = s.parameters.size();
        std::vector<std::vector<std::string>> domains;
        for (const auto& p : s.parameters) {
            domains.push_back(objects_of(p.type));
        }

        // Filters checked as soon as every variable they mention is bound.
        struct Filter {
            const Literal* literal;
            bool positive;
        };
        std::vector<std::vector<Filter>> filters_at(k + 1);
        auto add_filter = [&](const Literal& l, bool positive) {
            const bool is_eq = l.predicate == "=";
            const bool is_static_pre = positive && static_.contains(l.predicate) &&
                                       options_.remove_unachievable_atoms;
            if (is_eq || is_static_pre) {
                filters_at[static_cast<std::size_t>(ready_depth(l, s.parameters) + 1)].push_back({&l, positive});
            }
        };
        for (const auto& l : s.pre_pos) add_filter(l, true);
        for (const auto& l : s.pre_neg) {
            if (l.predicate == "=") add_filter(l, false);
        }

        std::vector<std::string> binding(k);
        auto passes = [&](std::size_t level) {
            for (const auto& f : filters_at[level]) {
                if (f.literal->predicate == "=") {
                    bool equal = resolve(f.literal->args[0], s.parameters, binding) ==
                                 resolve(f.literal->args[1], s.parameters, binding);
                    if (equal != f.positive) return false;
                } else if (!init_atoms_.contains(instantiate(*f.literal, s.parameters, binding))) {
                    return false;
                }
            }
            return true;
        };

        std::function<void(std::size_t)> rec = [&](std::size_t level) {
            if (!passes(level)) {
                return;
            }
            if (level == k) {
                emit(s, binding);
                return;
            }
            for (const auto& obj : domains[level]) {
                binding[level] = obj;
                rec(level + 1);
            }
        };
        rec(0);
    }

    void emit(const ActionSchema& s, const std::vector<std::string>& binding) {
        if (drafts_.size() >= options_.max_ground_actions) {
            throw LimitExceededError("grounding exceeds the cap of " + std::to_string(options_.max_ground_actions) +
                                     " ground actions (at " + std::to_string(drafts_.size() + 1) + ")");
        }
        GroundActionDraft d;
        d.name = ground_name(s.name, binding);
        d.cost = s.cost.value_or(1);
        auto collect = [&](const std::vector<Literal>& lits, std::vector<int>& out) {
            for (const auto& l : lits) {
                if (l.predicate == "=") continue;
                out.push_back(atom_id(instantiate(l, s.parameters, binding)));
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        };
        collect(s.pre_pos, d.pre_pos);
        collect(s.pre_neg, d.pre_neg);
        collect(s.add, d.add);
        collect(s.del, d.del);
        // Add-after-delete semantics: an atom both added and deleted ends up true.
        std::vector<int> del;
        std::set_difference(d.del.begin(), d.del.end(), d.add.begin(), d.add.end(), std::back_inserter(del));
        d.del = std::move(del);
        std::vector<int> clash;
        std::set_intersection(d.pre_pos.begin(), d.pre_pos.end(), d.pre_neg.begin(), d.pre_neg.end(),
                              std::back_inserter(clash));
        if (!clash.empty()) {
            return;  // never applicable
        }
        drafts_.push_back(std::move(d));
    }

    Task assemble() {
        std::vector<int> init_ids;
        for (const auto& a : init_atoms_) init_ids.push_back(atom_id(a));
        std::vector<int> goal_ids;
        for (const auto& a : model_.goal) goal_ids.push_back(atom_id(a));

        const bool simplify = options_.remove_unachievable_atoms || options_.prune_relaxed_unreachable;
        if (!simplify) {
            // Every mentioned atom survives; 0-ary predicates are atoms even if unused.
            for (const auto& p : model_.predicates) {
                if (p.parameters.empty()) {
                    atom_id({p.name, {}});
                }
            }
        }
        std::vector<bool> keep_atom(atoms_.size(), !simplify);
        std::vector<bool> keep_action(drafts_.size(), true);

        if (simplify) {
            std::vector<bool> achievable(atoms_.size(), false);
            for (int a : init_ids) achievable[static_cast<std::size_t>(a)] = true;
            if (options_.prune_relaxed_unreachable) {
                std::fill(keep_action.begin(), keep_action.end(), false);
                for (bool changed = true; changed;) {
                    changed = false;
                    for (std::size_t i = 0; i < drafts_.size(); ++i) {
                        if (keep_action[i]) continue;
                        const auto& d = drafts_[i];
                        if (std::all_of(d.pre_pos.begin(), d.pre_pos.end(),
                                        [&](int p) { return achievable[static_cast<std::size_t>(p)]; })) {
                            keep_action[i] = true;
                            changed = true;
                            for (int q : d.add) achievable[static_cast<std::size_t>(q)] = true;
                        }
                    }
                }
            } else {
                for (const auto& d : drafts_) {
                    for (int q : d.add) achievable[static_cast<std::size_t>(q)] = true;
                }
                for (std::size_t i = 0; i < drafts_.size(); ++i) {
                    const auto& d = drafts_[i];
                    keep_action[i] = std::all_of(d.pre_pos.begin(), d.pre_pos.end(),
                                                 [&](int p) { return achievable[static_cast<std::size_t>(p)]; });
                }
            }
            keep_atom = achievable;
            for (int g : goal_ids) keep_atom[static_cast<std::size_t>(g)] = true;
        }

        std::vector<int> order;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (keep_atom[i]) order.push_back(static_cast<int>(i));
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const auto& x = atoms_[static_cast<std::size_t>(a)];
            const auto& y = atoms_[static_cast<std::size_t>(b)];
            auto px = predicate_index_.at(x.predicate);
            auto py = predicate_index_.at(y.predicate);
            return px != py ? px < py : x.args < y.args;
        });

        Task task;
        std::vector<FluentId> fluent_of(atoms_.size(), -1);
        std::unordered_map<std::string, int> names;
        for (int a : order) {
            const auto& atom = atoms_[static_cast<std::size_t>(a)];
            std::string name = ground_name(atom.predicate, atom.args);
            auto id = static_cast<FluentId>(task.fluents.size());
            if (!names.emplace(name, a).second) {
                throw NameCollisionError("two ground atoms share the name " + name);
            }
            fluent_of[static_cast<std::size_t>(a)] = id;
            task.fluents.push_back({id, std::move(name)});
        }
        auto map_set = [&](const std::vector<int>& atoms) {
            FluentSet out;
            for (int a : atoms) {
                FluentId f = fluent_of[static_cast<std::size_t>(a)];
                if (f >= 0) out.push_back(f);
            }
            normalize(out);
            return out;
        };

        std::unordered_set<std::string> action_names;
        for (std::size_t i = 0; i < drafts_.size(); ++i) {
            if (!keep_action[i]) continue;
            const auto& d = drafts_[i];
            if (!action_names.insert(d.name).second) {
                throw NameCollisionError("two ground actions share the name " + d.name);
            }
            Action a;
            a.id = static_cast<ActionId>(task.actions.size());
            a.name = d.name;
            a.pre_pos = map_set(d.pre_pos);
            a.pre_neg = map_set(d.pre_neg);
            a.add = map_set(d.add);
            a.del = map_set(d.del);
            a.cost = d.cost;
            task.actions.push_back(std::move(a));
        }
        task.init = State(task.fluents.size(), map_set(init_ids));
        task.goal = map_set(goal_ids);
        return task;
    }

    const LiftedModel& model_;
    const GroundingOptions& options_;
    std::unordered_map<std::string, std::size_t> predicate_index_;
    std::unordered_set<std::string> static_;
    std::set<GroundAtom> init_atoms_;
    std::map<GroundAtom, int> atom_index_;
    std::vector<GroundAtom> atoms_;
    std::vector<GroundActionDraft> drafts_;
};

}  // namespace

Task ground(const LiftedModel& model, const GroundingOptions& options) {
    return Grounder(model, options).run();
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

const std::set<std::string, std::less<>> kReservedWords = {
    "and", "not", "or", "imply", "exists", "forall", "when", "increase", "decrease",
    "either", "define", "domain", "problem", "object", "number", "total-cost", "minimize"};

}  // namespace

std::string mangle_identifier(std::string_view name) {
    std::string out;
    out.reserve(name.size() + 1);
    for (char c : name) {
        auto u = static_cast<unsigned char>(c);
        char l = static_cast<char>(std::tolower(u));
        bool ok = (l >= 'a' && l <= 'z') || (l >= '0' && l <= '9') || l == '-' || l == '_';
        out.push_back(ok ? l : '_');
    }
    if (out.empty() || !(out.front() >= 'a' && out.front() <= 'z')) {
        out.insert(out.begin(), 'x');
    }
    if (kReservedWords.contains(out)) {
        out.push_back('_');
    }
    return out;
}

bool NamingContext::identity(const Task& task) const {
    for (const auto& f : task.fluents) {
        if (fluent_names.at(static_cast<std::size_t>(f.id)) != f.name) return false;
    }
    for (const auto& a : task.actions) {
        if (action_names.at(static_cast<std::size_t>(a.id)) != a.name) return false;
    }
    return true;
}

NamingContext make_naming(const Task& task) {
    NamingContext ctx;
    for (const auto& f : task.fluents) {
        std::string m = mangle_identifier(f.name);
        if (!ctx.fluent_by_emitted.emplace(m, f.id).second) {
            throw NameCollisionError("fluents " + task.fluent_name(ctx.fluent_by_emitted.at(m)) + " and " +
                                     f.name + " both mangle to " + m);
        }
        ctx.fluent_names.push_back(std::move(m));
    }
    for (const auto& a : task.actions) {
        std::string m = mangle_identifier(a.name);
        if (!ctx.action_by_emitted.emplace(m, a.id).second) {
            throw NameCollisionError("actions " +
                                     task.actions[static_cast<std::size_t>(ctx.action_by_emitted.at(m))].name +
                                     " and " + a.name + " both mangle to " + m);
        }
        ctx.action_names.push_back(std::move(m));
    }
    return ctx;
}

EmittedPddl emit_pddl(const Task& task, const NamingContext& names) {
    if (auto report = validate_task(task); !report.empty()) {
        throw InputError("cannot emit an invalid task: " + report.front());
    }
    if (names.fluent_names.size() != task.num_fluents() || names.action_names.size() != task.actions.size()) {
        throw InputError("naming context does not match the task");
    }
    const bool negative = std::any_of(task.actions.begin(), task.actions.end(),
                                      [](const Action& a) { return !a.pre_neg.empty(); });
    const bool costs = std::any_of(task.actions.begin(), task.actions.end(),
                                   [](const Action& a) { return a.cost != 1; });
    auto fl = [&](FluentId f) { return "(" + names.fluent_names[static_cast<std::size_t>(f)] + ")"; };

    std::ostringstream d;
    d << "(define (domain " << names.domain_name << ")\n";
    d << "  (:requirements :strips";
    if (negative) d << " :negative-preconditions";
    if (costs) d << " :action-costs";
    d << ")\n";
    d << "  (:predicates";
    for (const auto& f : task.fluents) {
        d << "\n    " << fl(f.id);
    }
    d << ")\n";
    if (costs) {
        d << "  (:functions (total-cost) - number)\n";
    }
    for (const auto& a : task.actions) {
        d << "  (:action " << names.action_names[static_cast<std::size_t>(a.id)] << "\n";
        d << "    :parameters ()\n";
        d << "    :precondition (and";
        for (FluentId f : a.pre_pos) d << ' ' << fl(f);
        for (FluentId f : a.pre_neg) d << " (not " << fl(f) << ')';
        d << ")\n";
        d << "    :effect (and";
        for (FluentId f : a.add) d << ' ' << fl(f);
        for (FluentId f : a.del) d << " (not " << fl(f) << ')';
        if (costs) d << " (increase (total-cost) " << a.cost << ')';
        d << "))\n";
    }
    d << ")\n";

    std::ostringstream p;
    p << "(define (problem " << names.problem_name << ")\n";
    p << "  (:domain " << names.domain_name << ")\n";
    p << "  (:init";
    for (FluentId f : task.init.fluents()) p << "\n    " << fl(f);
    if (costs) p << "\n    (= (total-cost) 0)";
    p << ")\n";
    p << "  (:goal (and";
    for (FluentId g : task.goal) p << "\n    " << fl(g);
    p << "))\n";
    if (costs) p << "  (:metric minimize (total-cost))\n";
    p << ")\n";
    return {d.str(), p.str()};
}

EmittedPddl emit_pddl(const Task& task) { return emit_pddl(task, make_naming(task)); }

// ---------------------------------------------------------------------------
// Plan files
// ---------------------------------------------------------------------------

PlanFile parse_plan_file(std::string_view text) {
    static const std::regex kCost(R"(^;\s*cost\s*=\s*(\d+)\b.*)", std::regex::icase);
    PlanFile out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        start = end + 1;
        ++line_no;

        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            if (end == text.size()) break;
            continue;
        }
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        if (line.front() == ';') {
            std::smatch m;
            if (std::regex_match(line, m, kCost)) {
                Cost c = 0;
                const std::string digits = m[1].str();
                auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), c);
                if (ec != std::errc{}) {
                    throw PlanFileError(line_no, "cost value out of range");
                }
                out.declared_cost = c;
            }
        } else {
            if (line.front() != '(' || line.back() != ')') {
                throw PlanFileError(line_no, "expected (action-name ...), got " + line);
            }
            std::istringstream tokens(line.substr(1, line.size() - 2));
            std::vector<std::string> parts;
            for (std::string t; tokens >> t;) {
                if (t.find_first_of("()") != std::string::npos) {
                    throw PlanFileError(line_no, "nested parentheses in " + line);
                }
                std::transform(t.begin(), t.end(), t.begin(),
                               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
                parts.push_back(std::move(t));
            }
            if (parts.empty()) {
                throw PlanFileError(line_no, "empty action");
            }
            out.actions.push_back(ground_name(parts.front(), {parts.begin() + 1, parts.end()}));
        }
        if (end == text.size()) break;
    }
    return out;
}

Plan resolve_plan(const Task& task, const std::vector<std::string>& action_names, const NamingContext* names) {
    std::unordered_map<std::string, ActionId> by_name;
    for (const auto& a : task.actions) {
        std::string lower = a.name;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        by_name.emplace(lower, a.id);
    }
    Plan plan;
    for (std::size_t i = 0; i < action_names.size(); ++i) {
        const auto& n = action_names[i];
        if (names != nullptr) {
            if (auto it = names->action_by_emitted.find(n); it != names->action_by_emitted.end()) {
                plan.steps.push_back(it->second);
                continue;
            }
        }
        auto it = by_name.find(n);
        if (it == by_name.end()) {
            throw InputError("plan step " + std::to_string(i) + ": unknown action " + n);
        }
        plan.steps.push_back(it->second);
    }
    return plan;
}

std::string write_plan_file(const Task& task, const Plan& plan) {
    std::ostringstream out;
    for (ActionId id : plan.steps) {
        out << '(' << task.actions.at(static_cast<std::size_t>(id)).name << ")\n";
    }
    const bool unit = std::all_of(plan.steps.begin(), plan.steps.end(), [&](ActionId id) {
        return task.actions[static_cast<std::size_t>(id)].cost == 1;
    });
    out << "; cost = " << plan_cost(task, plan) << (unit ? " (unit cost)" : " (general cost)") << '\n';
    return out.str();
}

}  // namespace commitplan
