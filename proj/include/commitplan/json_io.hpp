#pragma once

#include <map>
#include <string>
#include <string_view>

#include "commitplan/compiler.hpp"
#include "commitplan/plan_map.hpp"
#include "commitplan/search.hpp"
#include "commitplan/strips.hpp"

namespace commitplan {

inline constexpr std::string_view kTaskFormat = "strips-task/1";
inline constexpr std::string_view kCompiledFormat = "commit-task/1";
inline constexpr std::string_view kAchievementFormat = "achievement-report/1";
inline constexpr std::string_view kMappingFormat = "plan-mapping/1";
inline constexpr std::string_view kSearchFormat = "search-result/1";

// Throws JsonSchemaError carrying the JSON path of the offending value.
Task read_json_task(std::string_view text);
std::string write_json_task(const Task& task);

// Base task, commit task and provenance table in one document.
CompiledTask read_json_compiled(std::string_view text);
std::string write_json_compiled(const CompiledTask& compiled);

std::string write_json_achievements(const Task& task, const Plan& plan, const AchievementReport& report);

std::string write_json_mapping(const Task& source, const Task& target, const MappingResult& mapping,
                               std::string_view direction);

std::string write_json_search(const Task& task, const SearchResult& result);

}  // namespace commitplan
