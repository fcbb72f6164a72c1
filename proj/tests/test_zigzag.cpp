#include <catch2/catch_amalgamated.hpp>

#include "a1fib/zigzag.hpp"

#include <queue>
#include <random>
#include <set>

using namespace a1fib;

namespace {

Zigzag zz(std::initializer_list<int> w) {
    Zigzag z;
    for (int v : w) z.w.push_back(BigInt(v));
    return z;
}

// Reading direction is a relabeling of the same chain: canonicalize.
std::vector<int> canon(const std::vector<BigInt>& w) {
    std::vector<int> k, r;
    for (const auto& v : w) k.push_back(static_cast<int>(v.convert_to<long long>()));
    r.assign(k.rbegin(), k.rend());
    return std::min(k, r);
}

// Brute-force move-orbit explorer: all chains reachable with bounded length
// and weight from the input, via blowups, blowdowns and elementary moves.
std::set<std::vector<int>> orbit(const Zigzag& start, std::size_t max_len, int max_abs,
                                 std::size_t cap = 2000000) {
    std::set<std::vector<int>> seen;
    std::queue<std::vector<BigInt>> todo;
    seen.insert(canon(start.w));
    todo.push(start.w);
    auto push = [&](std::vector<BigInt> w) {
        if (w.empty() || w.size() > max_len) return;
        for (const auto& v : w)
            if (v > max_abs || v < -max_abs) return;
        auto k = canon(w);
        if (seen.count(k) || seen.size() >= cap) return;
        seen.insert(k);
        todo.push(std::move(w));
    };
    while (!todo.empty()) {
        auto w = todo.front();
        todo.pop();
        std::size_t n = w.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            auto c = w;
            apply_move(c, {ZigzagMove::Kind::blowup_edge, i, Side::left});
            push(std::move(c));
        }
        for (Side s : {Side::left, Side::right}) {
            auto c = w;
            apply_move(c, {ZigzagMove::Kind::blowup_end, 0, s});
            push(std::move(c));
        }
        for (std::size_t i = 0; i < n; ++i)
            if (w[i] == -1 && n > 1) {
                auto c = w;
                apply_move(c, {ZigzagMove::Kind::blowdown, i, Side::left});
                push(std::move(c));
            }
    }
    return seen;
}

} // namespace

TEST_CASE("elementary transform: displayed rule") {
    // [[-3, 0, -1]] at vertex 1 toward the right
    auto out = elementary_transform(zz({-3, 0, -1}), 1, Side::right);
    CHECK(out == zz({-2, 0, -2}));
    // inverse pair is the identity
    auto back = elementary_transform(out, 1, Side::left);
    CHECK(back == zz({-3, 0, -1}));
}

TEST_CASE("elementary transform: end vertex and errors") {
    auto out = elementary_transform(zz({0, 0}), 0, Side::right);
    CHECK(out == zz({0, -1}));
    CHECK(elementary_transform(out, 0, Side::left) == zz({0, 0}));
    CHECK_THROWS_WITH(elementary_transform(zz({1, 0}), 0, Side::left),
                      Catch::Matchers::ContainsSubstring("not_applicable"));
    CHECK_THROWS_WITH(elementary_transform(zz({0}), 3, Side::left),
                      Catch::Matchers::ContainsSubstring("bad_index"));
}

TEST_CASE("standardize the positive single vertex family") {
    for (int d = 2; d <= 8; ++d) {
        Zigzag z;
        z.w.push_back(BigInt(d));
        auto res = standardize(z);
        REQUIRE(res.standard.size() == static_cast<std::size_t>(d + 1));
        CHECK(res.standard.w[0] == 0);
        CHECK(res.standard.w[1] == 0);
        for (std::size_t i = 2; i < res.standard.size(); ++i) CHECK(res.standard.w[i] == -2);
        CHECK(res.standard.is_standard());
        CHECK(replay(z, res.log) == res.standard);
    }
}

TEST_CASE("standardize leaves standard forms alone") {
    auto res = standardize(zz({0, 0, -5}));
    CHECK(res.standard == zz({0, 0, -5}));
    CHECK(res.log.empty());
}

TEST_CASE("standardize [[2,-1,-3]]: unique standard form up to reversion") {
    auto res = standardize(zz({2, -1, -3}));
    CHECK(res.standard == zz({0, 0, -3, -2, -2}));
    CHECK(res.reversed_form == zz({0, 0, -2, -2, -3}));
    CHECK(replay(zz({2, -1, -3}), res.log) == res.standard);

    // brute-force: the move orbit of the input contains exactly the two
    // reversion-related standard forms
    auto reach = orbit(zz({2, -1, -3}), 8, 8);
    std::set<std::vector<int>> standards;
    for (const auto& k : reach) {
        Zigzag fwd, bwd;
        for (int v : k) fwd.w.push_back(BigInt(v));
        bwd.w.assign(fwd.w.rbegin(), fwd.w.rend());
        if (fwd.is_standard()) standards.insert(fwd.w.empty() ? k : canon(fwd.w));
        if (bwd.is_standard()) standards.insert(canon(bwd.w));
    }
    CHECK(standards == std::set<std::vector<int>>{canon(zz({0, 0, -3, -2, -2}).w),
                                                  canon(zz({0, 0, -2, -2, -3}).w)});
}

TEST_CASE("standardize output is inside the move orbit") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 30; ++it) {
        std::size_t n = 1 + rng() % 4;
        Zigzag z;
        for (std::size_t i = 0; i < n; ++i) z.w.push_back(BigInt(static_cast<int>(rng() % 7) - 4));
        auto res = standardize(z);
        CHECK(replay(z, res.log) == res.standard);
        auto reach = orbit(z, z.size() + 6, 10);
        bool small_enough = true;
        for (const auto& v : res.standard.w)
            if (v > 10 || v < -10) small_enough = false;
        if (small_enough && res.standard.size() <= z.size() + 6) {
            INFO("input " << z.str() << " standard " << res.standard.str());
            CHECK(reach.count(canon(res.standard.w)));
        }
    }
}

TEST_CASE("standardize idempotence and revert involution on random chains") {
    std::mt19937_64 rng(37);
    for (int it = 0; it < 300; ++it) {
        std::size_t n = 1 + rng() % 8;
        Zigzag z;
        for (std::size_t i = 0; i < n; ++i) z.w.push_back(BigInt(static_cast<int>(rng() % 13) - 6));
        auto res = standardize(z);
        auto again = standardize(res.standard);
        CHECK(again.standard == res.standard);
        CHECK(replay(z, res.log) == res.standard);
        if (res.standard.is_standard()) {
            CHECK(revert(revert(res.standard)) == res.standard);
        }
    }
}

TEST_CASE("revert") {
    CHECK(revert(zz({0, 0, -2, -3})) == zz({0, 0, -3, -2}));
    CHECK(revert(zz({0, 0, -2, -2, -2})) == zz({0, 0, -2, -2, -2}));
    CHECK(revert(zz({0, 0, -4, -2, -3})) == zz({0, 0, -3, -2, -4}));
    CHECK_THROWS_WITH(revert(zz({0, -1, -3})),
                      Catch::Matchers::ContainsSubstring("not_standard"));
}

TEST_CASE("ml classification") {
    CHECK(ml_class(zz({0, 0, 0}).as_tree()) == MLClass::ML1);
    CHECK(ml_class(zz({0, 0, -2, -2, -2}).as_tree()) == MLClass::ML0);
    // star with three admissible arms
    WeightedTree star;
    star.vertices.push_back({0, BigInt(-2), Role::plain});
    for (int arm = 0; arm < 3; ++arm) {
        int a = 1 + 2 * arm, b = 2 + 2 * arm;
        star.vertices.push_back({a, BigInt(-2), Role::plain});
        star.vertices.push_back({b, BigInt(-3), Role::plain});
        star.edges.emplace_back(0, a);
        star.edges.emplace_back(a, b);
    }
    CHECK(ml_class(star) == MLClass::ML2);
    // one non-admissible extremal arm
    star.vertex(2).weight = BigInt(0);
    CHECK(ml_class(star) == MLClass::ML1);
    CHECK_THROWS_WITH(ml_class(WeightedTree{}), Catch::Matchers::ContainsSubstring("bad_input"));
    // chains never come back ML2
    CHECK(ml_class(zz({-2, -2}).as_tree()) == MLClass::ML0);
}
