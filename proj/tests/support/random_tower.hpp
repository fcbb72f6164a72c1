#pragma once

// Test support: deterministic random blowup towers over a small rational
// coordinate pool, plus an independent contractibility check.

#include <queue>
#include <random>
#include <set>

#include "a1fib/fiber_tower.hpp"

namespace a1fib::testsupport {

inline std::vector<Rational> coordinate_pool() {
    return {Rational(0), Rational(1), Rational(2), Rational(-1), Rational(3)};
}

template <ExactField F>
BlowupSpec<F> random_spec(std::mt19937_64& rng, std::size_t depth, F base_point = F(0)) {
    BlowupSpec<F> spec;
    spec.base_point = base_point;
    auto pool = coordinate_pool();
    std::size_t n_components = 1;
    std::vector<std::vector<std::size_t>> used(1); // pool indices used per component
    for (std::size_t i = 0; i < depth; ++i) {
        // candidate centers: any (component, pool coordinate), plus infinity
        // on non-root components
        struct Cand {
            int on;
            bool inf;
            std::size_t pool_idx;
        };
        std::vector<Cand> cands;
        for (std::size_t c = 0; c < n_components; ++c) {
            for (std::size_t p = 0; p < pool.size(); ++p)
                cands.push_back({static_cast<int>(c), false, p});
            if (c > 0) cands.push_back({static_cast<int>(c), true, 0});
        }
        const auto& pick = cands[rng() % cands.size()];
        typename BlowupSpec<F>::Blowup bl;
        bl.on = pick.on;
        bl.at = pick.inf ? Coord<F>::infinity()
                         : Coord<F>::finite(from_rational<F>(pool[pick.pool_idx]));
        spec.blowups.push_back(bl);
        ++n_components;
        used.emplace_back();
    }
    return spec;
}

// A free smooth pool point on the top model, if any: (component, coordinate).
template <ExactField F>
std::optional<std::pair<int, Coord<F>>> random_smooth_point(std::mt19937_64& rng,
                                                            const FiberModel<F>& m) {
    auto pool = coordinate_pool();
    std::vector<std::pair<int, Coord<F>>> frees;
    for (const auto& c : m.components)
        for (const auto& q : pool) {
            auto at = Coord<F>::finite(from_rational<F>(q));
            if (!m.node_at(c.id, at)) frees.emplace_back(c.id, at);
        }
    if (frees.empty()) return std::nullopt;
    return frees[rng() % frees.size()];
}

// Independent breadth-first contractibility decision (no memoization, no
// recursion order bias).
inline bool bfs_contractible(const WeightedTree& start) {
    auto key = [](const WeightedTree& t) {
        std::vector<std::string> parts;
        for (const auto& v : t.vertices) {
            std::string p = std::to_string(v.id) + ":" + v.weight.str() + ":";
            for (int n : t.neighbors(v.id)) p += std::to_string(n) + ",";
            parts.push_back(std::move(p));
        }
        std::sort(parts.begin(), parts.end());
        std::string k;
        for (auto& p : parts) k += p + ";";
        return k;
    };
    std::set<std::string> seen;
    std::queue<WeightedTree> todo;
    todo.push(start);
    seen.insert(key(start));
    while (!todo.empty()) {
        WeightedTree t = todo.front();
        todo.pop();
        if (t.vertices.empty()) return true;
        for (const auto& v : t.vertices) {
            if (v.weight != -1 || t.degree(v.id) > 2) continue;
            WeightedTree c = t;
            c.vertex(v.id).role = Role::plain;
            auto next = blowdown_step(c, v.id);
            auto k = key(next);
            if (seen.insert(k).second) todo.push(next);
        }
    }
    return false;
}

} // namespace a1fib::testsupport
