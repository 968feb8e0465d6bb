#include "commitplan/taskgen.hpp"

#include <algorithm>
#include <random>

#include "commitplan/errors.hpp"

namespace commitplan {

std::vector<std::string> validate_params(const GenParams& p) {
    std::vector<std::string> errors;
    auto check_range = [&](const char* name, IntRange r, int min_lo) {
        if (r.lo < min_lo || r.hi < r.lo) {
            errors.push_back(std::string(name) + " range [" + std::to_string(r.lo) + ", " +
                             std::to_string(r.hi) + "] is empty or below " + std::to_string(min_lo));
        }
    };
    auto check_probability = [&](const char* name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) {
            errors.push_back(std::string(name) + " must lie in [0, 1]");
        }
    };
    check_range("fluents", p.fluents, 1);
    check_range("actions", p.actions, 0);
    check_range("goal_size", p.goal_size, 0);
    check_range("cost", p.cost, 0);
    if (p.max_pre < 0 || p.max_add < 0 || p.max_del < 0) {
        errors.push_back("max_pre, max_add and max_del must be non-negative");
    }
    check_probability("negative_precondition_probability", p.negative_precondition_probability);
    check_probability("goal_initially_true_probability", p.goal_initially_true_probability);
    check_probability("init_true_probability", p.init_true_probability);
    return errors;
}

namespace {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    int uniform(IntRange r) { return uniform(r.lo, r.hi); }
    bool bernoulli(double p) { return std::bernoulli_distribution(p)(rng_); }

    // k distinct members of `pool`, sorted.
    FluentSet pick(std::vector<FluentId> pool, int k) {
        k = std::min<int>(k, static_cast<int>(pool.size()));
        for (int i = 0; i < k; ++i) {
            int j = uniform(i, static_cast<int>(pool.size()) - 1);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        }
        pool.resize(static_cast<std::size_t>(k));
        normalize(pool);
        return pool;
    }

private:
    std::mt19937_64 rng_;
};

std::vector<FluentId> without(int n, const FluentSet& excluded) {
    std::vector<FluentId> out;
    for (FluentId f = 0; f < n; ++f) {
        if (!contains(excluded, f)) {
            out.push_back(f);
        }
    }
    return out;
}

}  // namespace

Task generate(const GenParams& params) {
    if (auto errors = validate_params(params); !errors.empty()) {
        throw InputError("invalid generator parameters: " + errors.front());
    }
    Sampler s(params.seed);

    const int n = s.uniform(params.fluents);
    const int m = s.uniform(params.actions);

    Task task;
    for (int i = 0; i < n; ++i) {
        task.fluents.push_back({i, "f" + std::to_string(i)});
    }

    for (int i = 0; i < m; ++i) {
        Action a;
        a.id = i;
        a.name = "a" + std::to_string(i);
        a.pre_pos = s.pick(without(n, {}), s.uniform(0, params.max_pre));
        if (params.max_pre > 0 && s.bernoulli(params.negative_precondition_probability)) {
            a.pre_neg = s.pick(without(n, a.pre_pos), s.uniform(1, params.max_pre));
        }
        a.add = s.pick(without(n, {}), s.uniform(std::min(1, params.max_add), params.max_add));
        a.del = s.pick(without(n, a.add), s.uniform(0, params.max_del));
        a.cost = s.uniform(params.cost);
        task.actions.push_back(std::move(a));
    }

    task.goal = s.pick(without(n, {}), s.uniform(params.goal_size));
    task.init = State(static_cast<std::size_t>(n));
    for (FluentId f = 0; f < n; ++f) {
        const double p = contains(task.goal, f) ? params.goal_initially_true_probability
                                                : params.init_true_probability;
        if (s.bernoulli(p)) {
            task.init.set(f);
        }
    }
    return task;
}

}  // namespace commitplan
