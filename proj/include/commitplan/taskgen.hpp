#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commitplan/strips.hpp"

namespace commitplan {

struct IntRange {
    int lo = 0;
    int hi = 0;
};

// Parameters of the random task generator. Defaults keep the base state space
// at most 2^8 so exhaustive oracles stay cheap.
struct GenParams {
    IntRange fluents{3, 8};
    IntRange actions{2, 8};
    int max_pre = 2;
    int max_add = 2;
    int max_del = 2;
    double negative_precondition_probability = 0.2;
    IntRange goal_size{1, 3};
    double goal_initially_true_probability = 0.2;
    double init_true_probability = 0.3;
    IntRange cost{1, 3};
    std::uint64_t seed = 0;
};

// Empty when the parameters are usable.
std::vector<std::string> validate_params(const GenParams& params);

// Deterministic in (params, seed). The result always passes validate_task;
// solvability is not guaranteed. Throws InputError for invalid parameters.
Task generate(const GenParams& params);

}  // namespace commitplan
