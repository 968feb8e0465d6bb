#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commitplan/json_io.hpp"
#include "commitplan/strips.hpp"

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(COMMITPLAN_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline commitplan::Task load_task(const std::string& name) {
    return commitplan::read_json_task(slurp(fixture(name)));
}

// F = {x, y}; a1 adds x; a2 needs x, deletes x, adds y; I = {}; G = {x, y}.
inline commitplan::Task worked_example() {
    commitplan::TaskBuilder b;
    b.add_fluent("x");
    b.add_fluent("y");
    b.add_action("a1", {}, {}, {"x"}, {});
    b.add_action("a2", {"x"}, {}, {"y"}, {"x"});
    b.set_init({});
    b.set_goal({"x", "y"});
    return b.build();
}

inline commitplan::Plan plan_of(const commitplan::Task& task, std::initializer_list<const char*> names) {
    commitplan::Plan p;
    for (const char* n : names) p.steps.push_back(*task.find_action(n));
    return p;
}

inline std::string names_of(const commitplan::Task& task, const commitplan::Plan& plan) {
    std::string out;
    for (auto id : plan.steps) {
        if (!out.empty()) out += ' ';
        out += task.actions.at(static_cast<std::size_t>(id)).name;
    }
    return out;
}

}  // namespace testsupport
