#pragma once

#include <optional>
#include <string>
#include <vector>

#include "a1fib/field.hpp"
#include "a1fib/zigzag.hpp"

namespace a1fib {

// Point coordinate on a fiber component: a scalar of the base field or the
// infinity marker (the side toward the section).
template <ExactField F>
struct Coord {
    bool inf = false;
    F q = F(0);

    static Coord infinity() { return Coord{true, F(0)}; }
    static Coord finite(F v) { return Coord{false, std::move(v)}; }

    friend bool operator==(const Coord& a, const Coord& b) {
        if (a.inf != b.inf) return false;
        return a.inf || a.q == b.q;
    }
    std::string str() const { return inf ? "inf" : to_string(q); }
};

enum class ComponentKind { root, outer, inner };

inline const char* kind_name(ComponentKind k) {
    switch (k) {
        case ComponentKind::root: return "root";
        case ComponentKind::outer: return "outer";
        case ComponentKind::inner: return "inner";
    }
    return "root";
}

template <ExactField F>
struct BlowupSpec {
    F base_point = F(0);
    struct Blowup {
        int on;
        Coord<F> at;
    };
    std::vector<Blowup> blowups;
};

// A special fiber built from an ordered blowup sequence: components with
// weights, multiplicities, kinds and parents, plus the registry of singular
// points in their canonical representation.
template <ExactField F>
class FiberModel {
public:
    struct Component {
        int id;
        BigInt weight;
        BigInt multiplicity;
        ComponentKind kind;
        std::optional<int> parent;
    };

    // A node always has a canonical name on its newer component: (comp, inf)
    // for the node on the section side of that component, (comp, 0) for the
    // other node an inner blowup creates.
    struct Node {
        int s_side;   // component toward the section
        int far_side; // the other component
        int rep_comp;
        bool rep_inf; // canonical coordinate: inf (section side) or 0
        bool alive = true;
    };

    // Where a blowup center sits one level down, in canonical coordinates.
    struct CenterRef {
        int comp;
        bool at_infinity;
        F q = F(0);
    };

    F base_point = F(0);
    std::vector<Component> components;
    std::vector<std::pair<int, int>> edges; // fiber-internal adjacencies
    std::vector<Node> nodes;
    std::vector<CenterRef> centers;     // centers[i] = center of the blowup creating comp i+1
    std::vector<int> outer_blowups;     // created component ids, in blowup order
    int section_attach = 0;

    const Component& component(int id) const { return components.at(static_cast<std::size_t>(id)); }

    WeightedTree fiber_tree() const {
        WeightedTree t;
        for (const auto& c : components)
            t.vertices.push_back({c.id, c.weight, Role::plain});
        t.edges = edges;
        return t;
    }

    std::map<int, BigInt> multiplicities() const {
        std::map<int, BigInt> m;
        for (const auto& c : components) m[c.id] = c.multiplicity;
        return m;
    }

    BigInt self_intersection() const {
        return fiber_self_intersection(fiber_tree(), multiplicities());
    }

    std::vector<int> contraction_order() const {
        return a1fib::contraction_order(fiber_tree(), multiplicities(), section_attach);
    }

    // The graph S + fiber is a path with S at one end.
    bool is_rooted_chain() const {
        auto t = fiber_tree();
        if (!t.is_chain()) return false;
        if (components.size() == 1) return true;
        return t.degree(section_attach) == 1;
    }

    // Canonical name of the center that created component `comp`.
    const CenterRef& center_of(int comp) const {
        if (comp <= 0 || static_cast<std::size_t>(comp) > centers.size())
            fail("bad_component", "component has no creating blowup");
        return centers[static_cast<std::size_t>(comp) - 1];
    }

    // Looks up (comp, coord); nullopt for a free smooth point.
    std::optional<int> node_at(int comp, const Coord<F>& at) const {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            const auto& [c, q, node] = names_[i];
            if (c == comp && q == at && nodes[static_cast<std::size_t>(node)].alive)
                return node;
        }
        return std::nullopt;
    }

    std::vector<std::tuple<int, Coord<F>, int>> node_names() const { return names_; }

    static FiberModel build(const BlowupSpec<F>& spec);

private:
    std::vector<std::tuple<int, Coord<F>, int>> names_; // (component, coord, node id)

    void rename(int node, int comp, const Coord<F>& to) {
        for (auto& [c, q, n] : names_)
            if (n == node && c == comp) {
                q = to;
                return;
            }
        names_.emplace_back(comp, to, node);
    }
};

template <ExactField F>
FiberModel<F> FiberModel<F>::build(const BlowupSpec<F>& spec) {
    FiberModel<F> m;
    m.base_point = spec.base_point;
    m.components.push_back({0, BigInt(0), BigInt(1), ComponentKind::root, std::nullopt});

    for (const auto& bl : spec.blowups) {
        if (bl.on < 0 || static_cast<std::size_t>(bl.on) >= m.components.size())
            fail("bad_component", "blowup references component " + std::to_string(bl.on) +
                                      " which does not exist yet");
        if (bl.on == 0 && bl.at.inf)
            fail("center_on_section", "the point at infinity of the root component lies on S");

        int fresh = static_cast<int>(m.components.size());
        auto node = m.node_at(bl.on, bl.at);

        if (!node && bl.at.inf)
            fail("stale_center", "infinity of component " + std::to_string(bl.on) +
                                     " does not name a current point");

        if (!node) {
            // outer blowup at a free smooth point
            auto& parent = m.components[static_cast<std::size_t>(bl.on)];
            parent.weight -= 1;
            m.components.push_back(
                {fresh, BigInt(-1), parent.multiplicity, ComponentKind::outer, bl.on});
            m.edges.emplace_back(bl.on, fresh);
            m.centers.push_back({bl.on, false, bl.at.q});
            m.outer_blowups.push_back(fresh);
            int n = static_cast<int>(m.nodes.size());
            m.nodes.push_back({bl.on, fresh, fresh, true});
            m.names_.emplace_back(bl.on, bl.at, n);
            m.names_.emplace_back(fresh, Coord<F>::infinity(), n);
        } else {
            // inner blowup at a node
            auto& nd = m.nodes[static_cast<std::size_t>(*node)];
            auto& cs = m.components[static_cast<std::size_t>(nd.s_side)];
            auto& cf = m.components[static_cast<std::size_t>(nd.far_side)];
            cs.weight -= 1;
            cf.weight -= 1;
            m.components.push_back({fresh, BigInt(-1), cs.multiplicity + cf.multiplicity,
                                    ComponentKind::inner, std::max(nd.s_side, nd.far_side)});
            m.edges.erase(std::remove_if(m.edges.begin(), m.edges.end(),
                                         [&](const std::pair<int, int>& e) {
                                             return (e.first == nd.s_side && e.second == nd.far_side) ||
                                                    (e.first == nd.far_side && e.second == nd.s_side);
                                         }),
                          m.edges.end());
            m.edges.emplace_back(nd.s_side, fresh);
            m.edges.emplace_back(fresh, nd.far_side);
            m.centers.push_back({nd.rep_comp, nd.rep_inf, F(0)});

            int old_s = nd.s_side, old_f = nd.far_side;
            nd.alive = false;
            int n_s = static_cast<int>(m.nodes.size());
            m.nodes.push_back({old_s, fresh, fresh, true});
            int n_f = static_cast<int>(m.nodes.size());
            m.nodes.push_back({fresh, old_f, fresh, false});
            // the dead node's names migrate to the two new nodes
            for (auto& [c, q, nid] : m.names_) {
                if (nid != *node) continue;
                if (c == old_s) nid = n_s;
                else nid = n_f;
            }
            m.names_.emplace_back(fresh, Coord<F>::infinity(), n_s);
            m.names_.emplace_back(fresh, Coord<F>::finite(F(0)), n_f);
        }
    }
    if (m.self_intersection() != 0)
        fail("internal", "fiber self-intersection must vanish after build");
    return m;
}

// The extended divisor: fiber-at-infinity and section vertices, the spine
// continuing into the fiber, and the remaining fiber components attached as
// feathers.
template <ExactField F>
struct ExtendedDivisor {
    WeightedTree tree;
    std::vector<int> spine; // tree vertex ids, C0 first
    struct Feather {
        int anchor;                         // spine position carrying the bridge
        std::vector<int> chain;             // tree vertex ids, bridge first
        std::optional<int> tip_mother_spine; // spine position of the tip's mother
    };
    std::vector<Feather> feathers;
};

namespace detail {

// all simple paths from `start` in the fiber tree, as id lists
inline void enumerate_paths(const WeightedTree& t, int start, std::vector<int>& cur,
                            std::set<int>& used, std::vector<std::vector<int>>& out) {
    out.push_back(cur);
    for (int nxt : t.neighbors(start)) {
        if (used.count(nxt)) continue;
        used.insert(nxt);
        cur.push_back(nxt);
        enumerate_paths(t, nxt, cur, used, out);
        cur.pop_back();
        used.erase(nxt);
    }
}

} // namespace detail

template <ExactField F>
ExtendedDivisor<F> extended_divisor(const FiberModel<F>& model, const Zigzag& boundary) {
    if (boundary.size() < 2 || boundary.w[0] != 0)
        fail("bad_boundary", "boundary must start with a zero fiber-at-infinity component");
    std::size_t tail = boundary.size() - 2;
    auto ft = model.fiber_tree();

    // locate the fiber path realizing the boundary tail, starting at T0
    std::vector<std::vector<int>> paths;
    {
        std::vector<int> cur{0};
        std::set<int> used{0};
        detail::enumerate_paths(ft, 0, cur, used, paths);
    }
    std::sort(paths.begin(), paths.end());
    std::vector<int> path;
    bool found = false;
    for (const auto& p : paths) {
        if (p.size() != tail) continue;
        bool ok = true;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (ft.vertex(p[i]).weight != boundary.w[i + 2]) { ok = false; break; }
        if (!ok) continue;
        // every off-path piece must be a feather: a chain hanging off the path
        std::set<int> on_path(p.begin(), p.end());
        bool feathers_ok = true;
        std::set<int> seen;
        for (const auto& v : ft.vertices) {
            if (on_path.count(v.id) || seen.count(v.id)) continue;
            std::vector<int> comp, stack{v.id};
            int attach_edges = 0;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                if (seen.count(x) || on_path.count(x)) continue;
                seen.insert(x);
                comp.push_back(x);
                for (int y : ft.neighbors(x)) {
                    if (on_path.count(y)) ++attach_edges;
                    else stack.push_back(y);
                }
            }
            // the piece must be a path whose end touches the spine
            WeightedTree sub;
            for (int id : comp) sub.vertices.push_back(ft.vertex(id));
            for (const auto& [a, b] : ft.edges)
                if (!on_path.count(a) && !on_path.count(b) &&
                    std::count(comp.begin(), comp.end(), a) &&
                    std::count(comp.begin(), comp.end(), b))
                    sub.edges.emplace_back(a, b);
            if (attach_edges != 1 || !sub.is_chain()) { feathers_ok = false; break; }
            int bridge = -1;
            for (int id : comp)
                for (int y : ft.neighbors(id))
                    if (on_path.count(y)) bridge = id;
            if (comp.size() > 1 && sub.degree(bridge) != 1) { feathers_ok = false; break; }
        }
        if (!feathers_ok) continue;
        path = p;
        found = true;
        break;
    }
    if (!found) fail("bad_boundary", "boundary tail does not match any fiber chain");

    ExtendedDivisor<F> out;
    int next_id = 0;
    auto add_vertex = [&](const BigInt& w, Role r) {
        out.tree.vertices.push_back({next_id, w, r});
        return next_id++;
    };
    std::map<int, int> comp2vertex;
    int c0 = add_vertex(boundary.w[0], Role::fiber_at_infinity);
    int c1 = add_vertex(boundary.w[1], Role::section);
    out.tree.edges.emplace_back(c0, c1);
    out.spine = {c0, c1};
    int prev = c1;
    for (int comp : path) {
        int v = add_vertex(ft.vertex(comp).weight, Role::plain);
        comp2vertex[comp] = v;
        out.tree.edges.emplace_back(prev, v);
        out.spine.push_back(v);
        prev = v;
    }

    // attach feathers
    std::set<int> on_path(path.begin(), path.end());
    std::set<int> seen;
    for (const auto& v : ft.vertices) {
        if (on_path.count(v.id) || seen.count(v.id)) continue;
        // collect the hanging chain starting from its bridge
        std::vector<int> comp, stack{v.id};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            if (seen.count(x) || on_path.count(x)) continue;
            seen.insert(x);
            comp.push_back(x);
            for (int y : ft.neighbors(x))
                if (!on_path.count(y)) stack.push_back(y);
        }
        int bridge = -1, anchor_comp = -1;
        for (int id : comp)
            for (int y : ft.neighbors(id))
                if (on_path.count(y)) { bridge = id; anchor_comp = y; }
        // order the chain from the bridge outward
        std::vector<int> chain{bridge};
        std::set<int> used{bridge};
        while (chain.size() < comp.size()) {
            for (int y : ft.neighbors(chain.back()))
                if (!on_path.count(y) && !used.count(y)) {
                    chain.push_back(y);
                    used.insert(y);
                    break;
                }
        }
        typename ExtendedDivisor<F>::Feather f;
        f.anchor = 0;
        for (std::size_t i = 0; i < out.spine.size(); ++i)
            if (comp2vertex.count(anchor_comp) && out.spine[i] == comp2vertex[anchor_comp])
                f.anchor = static_cast<int>(i);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            int vid = add_vertex(ft.vertex(chain[i]).weight,
                                 i == 0 ? Role::feather_bridge : Role::plain);
            comp2vertex[chain[i]] = vid;
            out.tree.edges.emplace_back(i == 0 ? comp2vertex[anchor_comp] : comp2vertex[chain[i - 1]],
                                        vid);
            f.chain.push_back(vid);
        }
        // mother of the tip: walk parents until a spine component
        int tip = chain.back();
        std::optional<int> mother;
        std::optional<int> cur = model.component(tip).parent;
        while (cur) {
            if (on_path.count(*cur)) {
                for (std::size_t i = 0; i < path.size(); ++i)
                    if (path[i] == *cur) mother = static_cast<int>(i) + 2;
                break;
            }
            if (*cur == 0) break;
            cur = model.component(*cur).parent;
        }
        f.tip_mother_spine = mother;
        out.feathers.push_back(std::move(f));
    }
    return out;
}

// Contractibility of a weighted subtree by (-1)-blowdowns to emptiness.
inline bool contractible_to_empty(const WeightedTree& t) {
    if (t.vertices.empty()) return true;
    // memoized search over blowdown orders
    static thread_local std::map<std::string, bool> memo;
    std::string key;
    {
        // canonical key: sorted (weight, sorted neighbor weights) is not a
        // complete invariant, so serialize the exact structure instead
        std::vector<std::string> parts;
        for (const auto& v : t.vertices) {
            std::string p = std::to_string(v.id) + ":" + v.weight.str() + ":";
            for (int n : t.neighbors(v.id)) p += std::to_string(n) + ",";
            parts.push_back(std::move(p));
        }
        std::sort(parts.begin(), parts.end());
        for (auto& p : parts) key += p + ";";
    }
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = false;
    for (const auto& v : t.vertices) {
        if (v.weight != -1 || t.degree(v.id) > 2) continue;
        WeightedTree copy = t;
        copy.vertex(v.id).role = Role::plain;
        if (contractible_to_empty(blowdown_step(copy, v.id))) { ok = true; break; }
    }
    memo[key] = ok;
    return ok;
}

enum class StarPlus { star, plus };

// Star/plus classification of the spine components C_i, i >= 2: C_i is a
// star component when the part of the extended divisor above C_i stays
// non-contractible, also after removing any single feather whose tip was
// born from a component before C_i.
template <ExactField F>
std::map<int, StarPlus> classify_star_components(const ExtendedDivisor<F>& ext) {
    std::map<int, StarPlus> out;
    auto subtree_above = [&](std::size_t i, int skip_feather) {
        WeightedTree t;
        std::set<int> keep;
        for (std::size_t k = i + 1; k < ext.spine.size(); ++k) keep.insert(ext.spine[k]);
        for (std::size_t fi = 0; fi < ext.feathers.size(); ++fi) {
            const auto& f = ext.feathers[fi];
            if (static_cast<int>(fi) == skip_feather) continue;
            if (static_cast<std::size_t>(f.anchor) >= i + 1)
                for (int id : f.chain) keep.insert(id);
        }
        for (const auto& v : ext.tree.vertices)
            if (keep.count(v.id)) t.vertices.push_back({v.id, v.weight, Role::plain});
        for (const auto& [a, b] : ext.tree.edges)
            if (keep.count(a) && keep.count(b)) t.edges.emplace_back(a, b);
        return t;
    };
    for (std::size_t i = 2; i < ext.spine.size(); ++i) {
        bool star = !contractible_to_empty(subtree_above(i, -1));
        if (star) {
            for (std::size_t fi = 0; fi < ext.feathers.size(); ++fi) {
                const auto& f = ext.feathers[fi];
                if (static_cast<std::size_t>(f.anchor) < i + 1) continue;
                if (!f.tip_mother_spine || *f.tip_mother_spine >= static_cast<int>(i)) continue;
                if (contractible_to_empty(subtree_above(i, static_cast<int>(fi)))) {
                    star = false;
                    break;
                }
            }
        }
        out[static_cast<int>(i)] = star ? StarPlus::star : StarPlus::plus;
    }
    return out;
}

} // namespace a1fib
