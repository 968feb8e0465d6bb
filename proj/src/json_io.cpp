#include "commitplan/json_io.hpp"

#include <json.hpp>

#include <initializer_list>
#include <unordered_map>

#include "commitplan/errors.hpp"

namespace commitplan {

using json = nlohmann::ordered_json;

namespace {

std::string child(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw JsonSchemaError("$", std::string("malformed JSON: ") + e.what());
    }
}

void expect_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
        throw JsonSchemaError(path.empty() ? "$" : path, "expected an object");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw JsonSchemaError(child(path, key), "unknown key");
        }
    }
}

const json& require(const json& j, const std::string& path, std::string_view key) {
    auto it = j.find(std::string(key));
    if (it == j.end()) {
        throw JsonSchemaError(child(path, key), "missing required key");
    }
    return *it;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw JsonSchemaError(path, "expected a string");
    }
    return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) {
        throw JsonSchemaError(path, "expected an array");
    }
    return j;
}

void check_format(const json& j, const std::string& path, std::string_view expected) {
    const std::string p = child(path, "format");
    std::string got = as_string(require(j, path, "format"), p);
    if (got != expected) {
        throw JsonSchemaError(p, "expected format \"" + std::string(expected) + "\", got \"" + got + "\"");
    }
}

class NameIndex {
public:
    explicit NameIndex(const Task& task) {
        for (const auto& f : task.fluents) {
            by_name_.emplace(f.name, f.id);
        }
    }

    FluentSet resolve(const json& list, const std::string& path) const {
        FluentSet out;
        const json& arr = as_array(list, path);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = item(path, i);
            std::string name = as_string(arr[i], p);
            auto it = by_name_.find(name);
            if (it == by_name_.end()) {
                throw JsonSchemaError(p, "unknown fluent \"" + name + "\"");
            }
            out.push_back(it->second);
        }
        normalize(out);
        return out;
    }

private:
    std::unordered_map<std::string, FluentId> by_name_;
};

Task task_from_json(const json& j, const std::string& path, bool standalone) {
    expect_object(j, path, {"format", "fluents", "actions", "init", "goal"});
    if (standalone || j.contains("format")) {
        check_format(j, path, kTaskFormat);
    }

    Task task;
    const std::string fpath = child(path, "fluents");
    const json& fluents = as_array(require(j, path, "fluents"), fpath);
    std::unordered_map<std::string, FluentId> seen;
    for (std::size_t i = 0; i < fluents.size(); ++i) {
        std::string name = as_string(fluents[i], item(fpath, i));
        if (name.empty()) {
            throw JsonSchemaError(item(fpath, i), "empty fluent name");
        }
        auto id = static_cast<FluentId>(i);
        if (!seen.emplace(name, id).second) {
            throw JsonSchemaError(item(fpath, i), "duplicate fluent \"" + name + "\"");
        }
        task.fluents.push_back({id, std::move(name)});
    }
    NameIndex names(task);

    const std::string apath = child(path, "actions");
    const json& actions = as_array(require(j, path, "actions"), apath);
    std::unordered_map<std::string, std::size_t> action_names;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const std::string p = item(apath, i);
        const json& a = actions[i];
        expect_object(a, p, {"name", "pre_pos", "pre_neg", "add", "del", "cost"});
        Action act;
        act.id = static_cast<ActionId>(i);
        act.name = as_string(require(a, p, "name"), child(p, "name"));
        if (!action_names.emplace(act.name, i).second) {
            throw JsonSchemaError(child(p, "name"), "duplicate action \"" + act.name + "\"");
        }
        auto set = [&](std::string_view key) {
            auto it = a.find(std::string(key));
            return it == a.end() ? FluentSet{} : names.resolve(*it, child(p, key));
        };
        act.pre_pos = set("pre_pos");
        act.pre_neg = set("pre_neg");
        act.add = set("add");
        act.del = set("del");
        if (auto it = a.find("cost"); it != a.end()) {
            if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
                throw JsonSchemaError(child(p, "cost"), "expected a non-negative integer");
            }
            act.cost = it->get<Cost>();
        }
        task.actions.push_back(std::move(act));
    }

    task.init = State(task.num_fluents(), names.resolve(require(j, path, "init"), child(path, "init")));
    task.goal = names.resolve(require(j, path, "goal"), child(path, "goal"));
    return task;
}

json names_of(const Task& task, const FluentSet& set) {
    json out = json::array();
    for (FluentId f : set) {
        out.push_back(task.fluent_name(f));
    }
    return out;
}

json task_to_json(const Task& task) {
    json j;
    j["format"] = kTaskFormat;
    json fluents = json::array();
    for (const auto& f : task.fluents) {
        fluents.push_back(f.name);
    }
    j["fluents"] = std::move(fluents);
    json actions = json::array();
    for (const auto& a : task.actions) {
        json ja;
        ja["name"] = a.name;
        ja["pre_pos"] = names_of(task, a.pre_pos);
        ja["pre_neg"] = names_of(task, a.pre_neg);
        ja["add"] = names_of(task, a.add);
        ja["del"] = names_of(task, a.del);
        ja["cost"] = a.cost;
        actions.push_back(std::move(ja));
    }
    j["actions"] = std::move(actions);
    j["init"] = names_of(task, task.init.fluents());
    j["goal"] = names_of(task, task.goal);
    return j;
}

json plan_names(const Task& task, const Plan& plan) {
    json out = json::array();
    for (ActionId id : plan.steps) {
        out.push_back(task.actions.at(static_cast<std::size_t>(id)).name);
    }
    return out;
}

}  // namespace

Task read_json_task(std::string_view text) { return task_from_json(parse_document(text), "", true); }

std::string write_json_task(const Task& task) { return task_to_json(task).dump(2) + "\n"; }

std::string write_json_compiled(const CompiledTask& c) {
    json j;
    j["format"] = kCompiledFormat;
    j["base"] = task_to_json(c.base);
    j["compiled"] = task_to_json(c.task);
    j["pending_goals"] = names_of(c.base, c.pending_goals);
    json map = json::array();
    for (std::size_t i = 0; i < c.commit_map.goals.size(); ++i) {
        map.push_back({{"goal", c.base.fluent_name(c.commit_map.goals[i])},
                       {"commit", c.task.fluent_name(c.commit_map.commit_of[i])}});
    }
    j["commit_map"] = std::move(map);
    json prov = json::array();
    for (std::size_t i = 0; i < c.provenance.size(); ++i) {
        const auto& p = c.provenance[i];
        prov.push_back({{"action", c.task.actions[i].name},
                        {"base", c.base.actions.at(static_cast<std::size_t>(p.base_action)).name},
                        {"variant", to_string(p.variant)},
                        {"committed", names_of(c.base, p.committed)}});
    }
    j["provenance"] = std::move(prov);
    return j.dump(2) + "\n";
}

CompiledTask read_json_compiled(std::string_view text) {
    const json j = parse_document(text);
    expect_object(j, "", {"format", "base", "compiled", "pending_goals", "commit_map", "provenance"});
    check_format(j, "", kCompiledFormat);

    CompiledTask c;
    c.base = task_from_json(require(j, "", "base"), "base", false);
    c.task = task_from_json(require(j, "", "compiled"), "compiled", false);
    NameIndex base_names(c.base);
    NameIndex compiled_names(c.task);
    c.pending_goals = base_names.resolve(require(j, "", "pending_goals"), "pending_goals");

    const json& map = as_array(require(j, "", "commit_map"), "commit_map");
    std::vector<std::pair<FluentId, FluentId>> pairs;
    for (std::size_t i = 0; i < map.size(); ++i) {
        const std::string p = item("commit_map", i);
        expect_object(map[i], p, {"goal", "commit"});
        FluentSet g = base_names.resolve(json::array({require(map[i], p, "goal")}), child(p, "goal"));
        FluentSet cf = compiled_names.resolve(json::array({require(map[i], p, "commit")}), child(p, "commit"));
        pairs.emplace_back(g.front(), cf.front());
    }
    std::sort(pairs.begin(), pairs.end());
    for (auto [g, cf] : pairs) {
        c.commit_map.goals.push_back(g);
        c.commit_map.commit_of.push_back(cf);
    }
    if (c.commit_map.goals != c.pending_goals) {
        throw JsonSchemaError("commit_map", "does not cover exactly the pending goals");
    }

    std::unordered_map<std::string, ActionId> base_actions;
    for (const auto& a : c.base.actions) {
        base_actions.emplace(a.name, a.id);
    }
    const json& prov = as_array(require(j, "", "provenance"), "provenance");
    if (prov.size() != c.task.actions.size()) {
        throw JsonSchemaError("provenance", "expected one record per compiled action (" +
                                                std::to_string(c.task.actions.size()) + "), got " +
                                                std::to_string(prov.size()));
    }
    for (std::size_t i = 0; i < prov.size(); ++i) {
        const std::string p = item("provenance", i);
        expect_object(prov[i], p, {"action", "base", "variant", "committed"});
        std::string action = as_string(require(prov[i], p, "action"), child(p, "action"));
        if (action != c.task.actions[i].name) {
            throw JsonSchemaError(child(p, "action"), "expected \"" + c.task.actions[i].name + "\"");
        }
        std::string base = as_string(require(prov[i], p, "base"), child(p, "base"));
        auto it = base_actions.find(base);
        if (it == base_actions.end()) {
            throw JsonSchemaError(child(p, "base"), "unknown base action \"" + base + "\"");
        }
        CompiledAction rec;
        rec.base_action = it->second;
        try {
            rec.variant = variant_from_string(as_string(require(prov[i], p, "variant"), child(p, "variant")));
        } catch (const InputError& e) {
            throw JsonSchemaError(child(p, "variant"), e.what());
        }
        rec.committed = base_names.resolve(require(prov[i], p, "committed"), child(p, "committed"));
        c.provenance.push_back(std::move(rec));
    }
    c.index_variants();
    return c;
}

std::string write_json_achievements(const Task& task, const Plan& plan, const AchievementReport& report) {
    json j;
    j["format"] = kAchievementFormat;
    j["plan"] = plan_names(task, plan);
    json goals = json::array();
    for (const auto& g : report.goals) {
        json jg;
        jg["goal"] = task.fluent_name(g.goal);
        if (g.achiever.initial) {
            jg["achiever"] = "INIT";
        } else {
            jg["achiever"] = g.achiever.step;
            jg["achiever_action"] = task.actions.at(static_cast<std::size_t>(plan.steps[g.achiever.step])).name;
        }
        json intervals = json::array();
        for (const auto& t : g.transient) {
            intervals.push_back(json::array({t.added_at, t.deleted_at}));
        }
        jg["transient"] = std::move(intervals);
        goals.push_back(std::move(jg));
    }
    j["goals"] = std::move(goals);
    return j.dump(2) + "\n";
}

std::string write_json_mapping(const Task& source, const Task& target, const MappingResult& m,
                               std::string_view direction) {
    json j;
    j["format"] = kMappingFormat;
    j["direction"] = direction;
    j["plan"] = plan_names(target, m.plan);
    j["cost"] = m.cost;
    json steps = json::array();
    for (const auto& s : m.steps) {
        steps.push_back({{"source_step", s.source_step},
                         {"target_step", s.target_step},
                         {"source_action", source.actions.at(static_cast<std::size_t>(s.source_action)).name},
                         {"target_action", target.actions.at(static_cast<std::size_t>(s.target_action)).name},
                         {"variant", to_string(s.variant)}});
    }
    j["steps"] = std::move(steps);
    json commits = json::object();
    const Task& base = direction == "forward" ? source : target;
    for (const auto& [goal, step] : m.commit_steps) {
        commits[base.fluent_name(goal)] = step;
    }
    j["commit_steps"] = std::move(commits);
    return j.dump(2) + "\n";
}

std::string write_json_search(const Task& task, const SearchResult& r) {
    json j;
    j["format"] = kSearchFormat;
    j["outcome"] = to_string(r.outcome);
    if (r.outcome == Outcome::limit) {
        j["limit"] = to_string(r.limit);
    }
    if (r.plan) {
        j["cost"] = r.cost;
        j["plan"] = plan_names(task, *r.plan);
    }
    j["expansions"] = r.stats.expansions;
    j["generations"] = r.stats.generations;
    j["peak_stored_states"] = r.stats.peak_stored_states;
    j["wall_time_s"] = r.stats.wall_time_s;
    return j.dump(2) + "\n";
}

}  // namespace commitplan
