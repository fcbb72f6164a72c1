#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "a1fib/error.hpp"
#include "a1fib/rational.hpp"

namespace a1fib {

enum class Role { plain, section, fiber_at_infinity, feather_bridge };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::plain: return "plain";
        case Role::section: return "section";
        case Role::fiber_at_infinity: return "fiber_at_infinity";
        case Role::feather_bridge: return "feather_bridge";
    }
    return "plain";
}

inline Role role_from_name(const std::string& s) {
    if (s == "plain") return Role::plain;
    if (s == "section") return Role::section;
    if (s == "fiber_at_infinity") return Role::fiber_at_infinity;
    if (s == "feather_bridge") return Role::feather_bridge;
    fail("bad_input", "unknown vertex role '" + s + "'");
}

// Integer-weighted tree with role markers.  Immutable in spirit: operations
// return new values.
struct WeightedTree {
    struct Vertex {
        int id;
        BigInt weight;
        Role role = Role::plain;
    };

    std::vector<Vertex> vertices;
    std::vector<std::pair<int, int>> edges;

    const Vertex& vertex(int id) const {
        for (const auto& v : vertices)
            if (v.id == id) return v;
        fail("bad_index", "no vertex with id " + std::to_string(id));
    }
    Vertex& vertex(int id) {
        for (auto& v : vertices)
            if (v.id == id) return v;
        fail("bad_index", "no vertex with id " + std::to_string(id));
    }
    bool has_vertex(int id) const {
        return std::any_of(vertices.begin(), vertices.end(),
                           [&](const Vertex& v) { return v.id == id; });
    }

    std::vector<int> neighbors(int id) const {
        std::vector<int> out;
        for (const auto& [a, b] : edges) {
            if (a == id) out.push_back(b);
            if (b == id) out.push_back(a);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    std::size_t degree(int id) const { return neighbors(id).size(); }

    bool is_tree() const {
        if (vertices.empty()) return false;
        if (edges.size() + 1 != vertices.size()) return false;
        std::set<int> seen;
        std::vector<int> stack{vertices.front().id};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second) continue;
            for (int w : neighbors(v))
                if (!seen.count(w)) stack.push_back(w);
        }
        return seen.size() == vertices.size();
    }

    void validate() const {
        if (!is_tree()) fail("bad_input", "edge set is not a tree");
        int sections = 0;
        for (const auto& v : vertices) {
            if (v.role == Role::section) ++sections;
            if (v.role == Role::feather_bridge && degree(v.id) < 1)
                fail("bad_input", "feather bridge vertex must have degree >= 1");
        }
        if (sections > 1) fail("bad_input", "at most one section vertex allowed");
    }

    // True when the tree is a path.
    bool is_chain() const {
        if (vertices.size() <= 1) return true;
        int ends = 0;
        for (const auto& v : vertices) {
            auto d = degree(v.id);
            if (d > 2) return false;
            if (d == 1) ++ends;
        }
        return ends == 2;
    }

    // Vertex ids along the path, smaller end id first; requires is_chain().
    std::vector<int> chain_order() const {
        if (vertices.empty()) return {};
        if (vertices.size() == 1) return {vertices.front().id};
        std::vector<int> ends;
        for (const auto& v : vertices)
            if (degree(v.id) == 1) ends.push_back(v.id);
        if (ends.size() != 2) fail("bad_input", "not a chain");
        int start = std::min(ends[0], ends[1]);
        std::vector<int> order{start};
        int prev = -1, cur = start;
        while (order.size() < vertices.size()) {
            for (int w : neighbors(cur))
                if (w != prev) {
                    order.push_back(w);
                    prev = cur;
                    cur = w;
                    break;
                }
        }
        return order;
    }
};

// One contraction of a (-1)-vertex: the vertex disappears, each former
// neighbor's weight rises by one, and a degree-2 vertex's neighbors become
// adjacent.
inline WeightedTree blowdown_step(const WeightedTree& t, int vertex_id) {
    const auto& v = t.vertex(vertex_id);
    if (v.weight != -1 || v.role != Role::plain)
        fail("not_contractible_vertex",
             "vertex " + std::to_string(vertex_id) + " is not a plain (-1)-vertex");
    auto nbrs = t.neighbors(vertex_id);
    if (nbrs.size() > 2)
        fail("not_contractible_vertex",
             "vertex " + std::to_string(vertex_id) + " has degree > 2");
    WeightedTree out;
    for (const auto& w : t.vertices) {
        if (w.id == vertex_id) continue;
        auto copy = w;
        if (std::find(nbrs.begin(), nbrs.end(), w.id) != nbrs.end()) copy.weight += 1;
        out.vertices.push_back(copy);
    }
    for (const auto& [a, b] : t.edges)
        if (a != vertex_id && b != vertex_id) out.edges.emplace_back(a, b);
    if (nbrs.size() == 2) out.edges.emplace_back(nbrs[0], nbrs[1]);
    return out;
}

// Total self-intersection of the weighted fiber divisor sum(m_i T_i):
// sum m_i^2 w_i + 2 sum_{edges} m_i m_j.  Zero for an honest fiber.
inline BigInt fiber_self_intersection(const WeightedTree& fiber,
                                      const std::map<int, BigInt>& mult) {
    BigInt s = 0;
    for (const auto& v : fiber.vertices) {
        BigInt m = mult.at(v.id);
        s += m * m * v.weight;
    }
    for (const auto& [a, b] : fiber.edges) s += 2 * mult.at(a) * mult.at(b);
    return s;
}

// Sequence of (-1)-contractions reducing the fiber to a single weight-zero
// component, never contracting the component that meets the section.
// Deterministic: the newest eligible component goes first.
inline std::vector<int> contraction_order(const WeightedTree& fiber,
                                          const std::map<int, BigInt>& mult,
                                          int section_attach) {
    if (fiber.vertices.empty()) fail("not_a_fiber", "empty fiber");
    if (fiber_self_intersection(fiber, mult) != 0)
        fail("not_a_fiber", "total fiber has nonzero self-intersection");
    WeightedTree cur = fiber;
    std::vector<int> order;
    while (cur.vertices.size() > 1) {
        int pick = -1;
        for (const auto& v : cur.vertices) {
            if (v.id == section_attach) continue;
            if (v.weight != -1 || cur.degree(v.id) > 2) continue;
            pick = std::max(pick, v.id);
        }
        if (pick < 0)
            fail("not_a_fiber", "no contractible (-1)-component away from the section");
        cur = blowdown_step(cur, pick);
        order.push_back(pick);
    }
    if (cur.vertices.front().weight != 0)
        fail("not_a_fiber", "contraction does not end on a 0-component");
    return order;
}

} // namespace a1fib
