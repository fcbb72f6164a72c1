#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "a1fib/error.hpp"

namespace a1fib {

// A finite group given by its multiplication table.  Element 0 is the
// identity.
struct FiniteGroup {
    std::vector<std::vector<int>> table;
    std::vector<std::string> names;

    std::size_t order() const { return table.size(); }
    int mul(int a, int b) const { return table.at(a).at(b); }
    int inv(int a) const {
        for (int b = 0; b < static_cast<int>(order()); ++b)
            if (mul(a, b) == 0) return b;
        fail("oracle_violation", "element without inverse");
    }
    const std::string& name(int a) const { return names.at(static_cast<std::size_t>(a)); }

    static FiniteGroup cyclic(int n, const std::string& prefix = "g") {
        FiniteGroup g;
        g.table.assign(static_cast<std::size_t>(n), std::vector<int>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g.table[i][j] = (i + j) % n;
        for (int i = 0; i < n; ++i)
            g.names.push_back(i == 0 ? "e" : prefix + std::to_string(i));
        return g;
    }

    void validate() const {
        std::size_t n = order();
        if (names.size() != n) fail("bad_input", "group needs one name per element");
        for (const auto& row : table) {
            if (row.size() != n) fail("bad_input", "multiplication table is not square");
            for (int v : row)
                if (v < 0 || static_cast<std::size_t>(v) >= n)
                    fail("bad_input", "table entry out of range");
        }
        for (int a = 0; a < static_cast<int>(n); ++a) {
            if (mul(0, a) != a || mul(a, 0) != a) fail("bad_input", "element 0 must be neutral");
            inv(a);
        }
    }
};

// Letters are (vertex, element-of-that-vertex-group).
struct Letter {
    int vertex;
    int element;
    friend bool operator==(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

// A tree of finite groups: vertex groups, and for every tree edge the edge
// subgroup embedded into both endpoints, with caller-supplied left-coset
// representatives.
class TreeOfGroups {
public:
    struct Edge {
        int u, v;
        std::vector<int> image_u, image_v; // edge subgroup, index-aligned
        std::vector<int> reps_u, reps_v;   // left-coset representatives, identity first
    };

    std::vector<FiniteGroup> groups;
    std::vector<Edge> edges;

    const Edge* edge_between(int a, int b) const {
        for (const auto& e : edges)
            if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return &e;
        return nullptr;
    }

    void validate() const {
        for (const auto& g : groups) g.validate();
        for (const auto& e : edges) {
            if (e.image_u.size() != e.image_v.size())
                fail("bad_input", "edge images must have equal size");
            if (e.image_u.empty() || e.image_u[0] != 0 || e.image_v[0] != 0)
                fail("bad_input", "edge subgroup must contain the identity first");
            if (e.image_u.size() >= groups[static_cast<std::size_t>(e.u)].order() ||
                e.image_v.size() >= groups[static_cast<std::size_t>(e.v)].order())
                fail("bad_input", "edge group must be a proper subgroup of both endpoints");
            if (e.reps_u.empty() || e.reps_u[0] != 0 || e.reps_v.empty() || e.reps_v[0] != 0)
                fail("bad_input", "coset representatives must start with the identity");
            // the identification must be an isomorphism of subgroups
            const auto& gu = groups[static_cast<std::size_t>(e.u)];
            const auto& gv = groups[static_cast<std::size_t>(e.v)];
            for (std::size_t i = 0; i < e.image_u.size(); ++i)
                for (std::size_t j = 0; j < e.image_u.size(); ++j) {
                    int pu = gu.mul(e.image_u[i], e.image_u[j]);
                    int pv = gv.mul(e.image_v[i], e.image_v[j]);
                    int idx = -1;
                    for (std::size_t k = 0; k < e.image_u.size(); ++k)
                        if (e.image_u[k] == pu) idx = static_cast<int>(k);
                    if (idx < 0) fail("oracle_violation", "edge image is not a subgroup");
                    if (e.image_v[static_cast<std::size_t>(idx)] != pv)
                        fail("oracle_violation", "edge identification is not a homomorphism");
                }
        }
        // connectivity of the tree
        if (!groups.empty()) {
            std::set<int> seen{0};
            std::deque<int> todo{0};
            while (!todo.empty()) {
                int x = todo.front();
                todo.pop_front();
                for (const auto& e : edges) {
                    int other = e.u == x ? e.v : (e.v == x ? e.u : -1);
                    if (other >= 0 && seen.insert(other).second) todo.push_back(other);
                }
            }
            if (seen.size() != groups.size() || edges.size() + 1 != groups.size())
                fail("bad_input", "the underlying graph must be a tree");
        }
    }

    // index of an element inside the edge image at the given side, or -1
    int edge_index(const Edge& e, int vertex, int element) const {
        const auto& img = vertex == e.u ? e.image_u : e.image_v;
        for (std::size_t i = 0; i < img.size(); ++i)
            if (img[i] == element) return static_cast<int>(i);
        return -1;
    }
    int transfer(const Edge& e, int from_vertex, int element) const {
        int idx = edge_index(e, from_vertex, element);
        if (idx < 0) fail("oracle_violation", "element not in the edge subgroup");
        return (from_vertex == e.u ? e.image_v : e.image_u)[static_cast<std::size_t>(idx)];
    }

    // tree path between two vertices
    std::vector<int> path(int a, int b) const {
        std::map<int, int> parent;
        std::deque<int> todo{a};
        parent[a] = a;
        while (!todo.empty()) {
            int x = todo.front();
            todo.pop_front();
            if (x == b) break;
            for (const auto& e : edges) {
                int other = e.u == x ? e.v : (e.v == x ? e.u : -1);
                if (other >= 0 && !parent.count(other)) {
                    parent[other] = x;
                    todo.push_back(other);
                }
            }
        }
        if (!parent.count(b)) fail("bad_input", "vertices not connected");
        std::vector<int> p{b};
        while (p.back() != a) p.push_back(parent[p.back()]);
        std::reverse(p.begin(), p.end());
        return p;
    }
};

namespace detail {

// splice a word so consecutive letters sit at adjacent vertices
inline Word splice(const TreeOfGroups& t, const Word& w) {
    Word out;
    for (const auto& l : w) {
        if (l.vertex < 0 || static_cast<std::size_t>(l.vertex) >= t.groups.size())
            fail("bad_input", "letter at unknown vertex");
        if (l.element < 0 ||
            static_cast<std::size_t>(l.element) >= t.groups[static_cast<std::size_t>(l.vertex)].order())
            fail("oracle_violation", "letter not an element of its vertex group");
        if (!out.empty() && out.back().vertex != l.vertex &&
            !t.edge_between(out.back().vertex, l.vertex)) {
            auto p = t.path(out.back().vertex, l.vertex);
            for (std::size_t i = 1; i + 1 < p.size(); ++i) out.push_back({p[i], 0});
        }
        out.push_back(l);
    }
    return out;
}

} // namespace detail

// Canonical reduced word with the supplied coset representatives: merge
// same-vertex letters, pinch backtracks through edge subgroups, then push
// non-representative parts rightward.
inline Word normal_form(const TreeOfGroups& t, const Word& w_in) {
    Word w = detail::splice(t, w_in);
    bool changed = true;
    while (changed) {
        changed = false;
        // merge adjacent letters at the same vertex
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i].vertex == w[i + 1].vertex) {
                w[i].element =
                    t.groups[static_cast<std::size_t>(w[i].vertex)].mul(w[i].element,
                                                                        w[i + 1].element);
                w.erase(w.begin() + static_cast<long>(i) + 1);
                changed = true;
                break;
            }
        if (changed) continue;
        // drop identity letters that merely connect a backtrack
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w.size() <= 1) break;
            const auto& l = w[i];
            bool interior_backtrack = i > 0 && i + 1 < w.size() &&
                                      w[i - 1].vertex == w[i + 1].vertex;
            bool at_end = i == 0 || i + 1 == w.size();
            if (!interior_backtrack && !at_end) continue;
            int neighbor = i > 0 ? w[i - 1].vertex : w[i + 1].vertex;
            const auto* e = t.edge_between(l.vertex, neighbor);
            if (!e) continue;
            if (t.edge_index(*e, l.vertex, l.element) < 0) continue;
            int moved = t.transfer(*e, l.vertex, l.element);
            if (i > 0) {
                w[i - 1].element = t.groups[static_cast<std::size_t>(neighbor)].mul(
                    w[i - 1].element, moved);
            } else {
                w[i + 1].element = t.groups[static_cast<std::size_t>(neighbor)].mul(
                    moved, w[i + 1].element);
            }
            w.erase(w.begin() + static_cast<long>(i));
            changed = true;
            break;
        }
    }
    // coset-representative sweep, left to right
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        const auto* e = t.edge_between(w[i].vertex, w[i + 1].vertex);
        if (!e) fail("internal", "normal form lost adjacency");
        const auto& g = t.groups[static_cast<std::size_t>(w[i].vertex)];
        const auto& reps = w[i].vertex == e->u ? e->reps_u : e->reps_v;
        // find the representative r with r^{-1} g_i in the edge image
        for (int r : reps) {
            int h = g.mul(g.inv(r), w[i].element);
            if (t.edge_index(*e, w[i].vertex, h) >= 0) {
                w[i].element = r;
                int moved = t.transfer(*e, w[i].vertex, h);
                w[i + 1].element = t.groups[static_cast<std::size_t>(w[i + 1].vertex)].mul(
                    moved, w[i + 1].element);
                break;
            }
        }
    }
    // canonical home for the empty / single edge-subgroup letter
    if (w.empty()) return w;
    if (w.size() == 1) {
        if (w[0].element == 0) return {};
        bool moved = true;
        while (moved) {
            moved = false;
            for (const auto& e : t.edges) {
                int other = e.u == w[0].vertex ? e.v : (e.v == w[0].vertex ? e.u : -1);
                if (other < 0 || other >= w[0].vertex) continue;
                if (t.edge_index(e, w[0].vertex, w[0].element) < 0) continue;
                w[0] = {other, t.transfer(e, w[0].vertex, w[0].element)};
                moved = true;
            }
        }
    }
    return w;
}

inline Word word_inverse(const TreeOfGroups& t, const Word& w) {
    Word out;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        out.push_back({it->vertex,
                       t.groups[static_cast<std::size_t>(it->vertex)].inv(it->element)});
    return out;
}

inline Word word_mul(const TreeOfGroups& t, const Word& a, const Word& b) {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return normal_form(t, w);
}

inline std::string word_str(const TreeOfGroups& t, const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (const auto& l : w) {
        if (!out.empty()) out += ".";
        out += std::to_string(l.vertex) + ":" +
               t.groups[static_cast<std::size_t>(l.vertex)].name(l.element);
    }
    return out;
}

// ---- Bass-Serre tree exploration -----------------------------------------

struct BassSerreVertex {
    Word coset; // canonical representative word
    int type;   // the vertex group whose coset this is
    friend bool operator==(const BassSerreVertex&, const BassSerreVertex&) = default;
};

namespace detail {

inline std::string bs_key(const TreeOfGroups& t, const BassSerreVertex& v) {
    return std::to_string(v.type) + "|" + word_str(t, v.coset);
}

// canonical representative of (w * G_type)
inline BassSerreVertex bs_canon(const TreeOfGroups& t, Word w, int type) {
    w = normal_form(t, w);
    bool changed = true;
    while (changed && !w.empty()) {
        changed = false;
        const auto& last = w.back();
        if (last.vertex == type) {
            w.pop_back();
            w = normal_form(t, w);
            changed = true;
            continue;
        }
        const auto* e = t.edge_between(last.vertex, type);
        if (e && t.edge_index(*e, last.vertex, last.element) >= 0) {
            w.pop_back();
            w = normal_form(t, w);
            changed = true;
        }
    }
    // normalize the trailing letter modulo the edge toward `type`
    if (!w.empty()) {
        const auto* e = t.edge_between(w.back().vertex, type);
        if (e) {
            const auto& g = t.groups[static_cast<std::size_t>(w.back().vertex)];
            const auto& reps = w.back().vertex == e->u ? e->reps_u : e->reps_v;
            for (int r : reps) {
                int h = g.mul(g.inv(r), w.back().element);
                if (t.edge_index(*e, w.back().vertex, h) >= 0) {
                    w.back().element = r;
                    break;
                }
            }
            if (w.back().element == 0) {
                w.pop_back();
                return bs_canon(t, w, type);
            }
        }
    }
    return {w, type};
}

} // namespace detail

// Searches the tree of cosets for a vertex fixed by every generator: the
// orbit of the base vertex is spanned inside the ball of the given radius
// and extremal vertices are pruned until a fixed vertex remains.
struct FixedVertex {
    Word conjugator;
    int vertex;
};

inline std::optional<FixedVertex> bounded_fixed_vertex(const TreeOfGroups& t,
                                                       const std::vector<Word>& gens,
                                                       std::size_t length_bound,
                                                       std::size_t horizon) {
    for (const auto& g : gens)
        if (normal_form(t, g).size() > length_bound)
            fail("length_exceeded", "generator longer than the stated bound");
    if (horizon < length_bound) horizon = length_bound;

    // ball around the base coset
    BassSerreVertex base = detail::bs_canon(t, {}, 0);
    std::map<std::string, BassSerreVertex> ball;
    std::map<std::string, std::string> parent;
    std::map<std::string, std::size_t> depth;
    std::deque<BassSerreVertex> todo{base};
    auto key0 = detail::bs_key(t, base);
    ball[key0] = base;
    depth[key0] = 0;
    while (!todo.empty()) {
        auto v = todo.front();
        todo.pop_front();
        auto kv = detail::bs_key(t, v);
        if (depth[kv] >= horizon) continue;
        for (const auto& e : t.edges) {
            int other = e.u == v.type ? e.v : (e.v == v.type ? e.u : -1);
            if (other < 0) continue;
            const auto& reps = v.type == e.u ? e.reps_u : e.reps_v;
            for (int r : reps) {
                Word w = v.coset;
                if (r != 0) w.push_back({v.type, r});
                auto nb = detail::bs_canon(t, w, other);
                auto kn = detail::bs_key(t, nb);
                if (!ball.count(kn)) {
                    ball[kn] = nb;
                    parent[kn] = kv;
                    depth[kn] = depth[kv] + 1;
                    todo.push_back(nb);
                }
            }
        }
    }

    // orbit of the base under the group generated, clipped to the ball
    std::set<std::string> orbit{key0};
    std::deque<BassSerreVertex> frontier{base};
    std::vector<Word> step = gens;
    for (const auto& g : gens) step.push_back(word_inverse(t, g));
    while (!frontier.empty()) {
        auto v = frontier.front();
        frontier.pop_front();
        for (const auto& g : step) {
            Word w = g;
            w.insert(w.end(), v.coset.begin(), v.coset.end());
            auto img = detail::bs_canon(t, w, v.type);
            auto k = detail::bs_key(t, img);
            if (!ball.count(k)) continue; // outside the horizon
            if (orbit.insert(k).second) frontier.push_back(img);
        }
    }

    // span the orbit: union of the tree paths to the base
    std::set<std::string> span = orbit;
    for (const auto& k : orbit) {
        std::string cur = k;
        while (cur != key0) {
            cur = parent.at(cur);
            span.insert(cur);
        }
    }

    // prune extremal vertices until at most an edge is left
    auto span_degree = [&](const std::string& k) {
        std::size_t dgr = 0;
        for (const auto& sk : span) {
            if (sk == k) continue;
            if (parent.count(sk) && parent.at(sk) == k) ++dgr;
        }
        if (k != key0 && span.count(parent.at(k))) ++dgr;
        return dgr;
    };
    while (span.size() > 2) {
        std::vector<std::string> leaves;
        for (const auto& k : span)
            if (span_degree(k) <= 1) leaves.push_back(k);
        if (leaves.size() >= span.size()) break;
        for (const auto& k : leaves) span.erase(k);
    }

    // check fixedness and return the conjugator
    for (const auto& k : span) {
        const auto& v = ball.at(k);
        bool fixed = true;
        for (const auto& g : gens) {
            Word w = g;
            w.insert(w.end(), v.coset.begin(), v.coset.end());
            auto img = detail::bs_canon(t, w, v.type);
            if (!(detail::bs_key(t, img) == k)) { fixed = false; break; }
        }
        if (fixed) return FixedVertex{v.coset, v.type};
    }
    return std::nullopt;
}

// ---- graphs of groups ------------------------------------------------------

// A graph of groups: vertex groups, arrows with an edge group embedded into
// source and target.  Paths reduce by the two defining relations.
struct GraphOfGroups {
    struct Arrow {
        int source, target;
        std::vector<int> into_source, into_target; // kappa, lambda images, aligned
    };
    std::vector<FiniteGroup> groups;
    std::vector<Arrow> arrows;
};

struct PathStep {
    int arrow;    // index into arrows
    bool forward; // false = formal inverse
};

// (g0, sigma1, g1, ..., sigmar, gr)
struct GroupPath {
    std::vector<int> elements; // r+1 vertex elements
    std::vector<PathStep> steps;
};

inline void validate_path(const GraphOfGroups& g, const GroupPath& p) {
    if (p.elements.size() != p.steps.size() + 1) fail("bad_path", "ragged path");
    int at = -1;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& a = g.arrows.at(static_cast<std::size_t>(p.steps[i].arrow));
        int s = p.steps[i].forward ? a.source : a.target;
        int t = p.steps[i].forward ? a.target : a.source;
        if (at >= 0 && s != at) fail("bad_path", "arrows do not compose");
        at = t;
    }
}

// applies the defining relations until no rule applies: the conjugation
// relation in both readings (pinching sigma..sigma^{-1} pairs, and pushing
// edge-subgroup elements leftward through an arrow), and the merge rule for
// trivial middles
inline GroupPath gog_reduce(const GraphOfGroups& g, GroupPath p) {
    validate_path(g, p);
    bool changed = true;
    while (changed) {
        changed = false;
        // push the edge-subgroup factor of the element after an arrow to the
        // other side: sigma * (lambda(h) r) = (kappa(h)) sigma * r, where r
        // is the smallest element of the coset image*m
        for (std::size_t i = 0; i < p.steps.size(); ++i) {
            const auto& a = g.arrows[static_cast<std::size_t>(p.steps[i].arrow)];
            const auto& after_img = p.steps[i].forward ? a.into_target : a.into_source;
            const auto& before_img = p.steps[i].forward ? a.into_source : a.into_target;
            int after_vertex = p.steps[i].forward ? a.target : a.source;
            const auto& ga = g.groups[static_cast<std::size_t>(after_vertex)];
            int m = p.elements[i + 1];
            int rep = m;
            for (int f : after_img) rep = std::min(rep, ga.mul(ga.inv(f), m));
            if (rep == m) continue;
            int factor = ga.mul(m, ga.inv(rep)); // in the after-image
            int idx = -1;
            for (std::size_t k = 0; k < after_img.size(); ++k)
                if (after_img[k] == factor) { idx = static_cast<int>(k); break; }
            if (idx < 0) fail("oracle_violation", "edge image is not a subgroup");
            int before_vertex = p.steps[i].forward ? a.source : a.target;
            const auto& grp = g.groups[static_cast<std::size_t>(before_vertex)];
            p.elements[i] = grp.mul(p.elements[i], before_img[static_cast<std::size_t>(idx)]);
            p.elements[i + 1] = rep;
            changed = true;
            break;
        }
        if (changed) continue;
        for (std::size_t i = 0; i + 1 < p.steps.size(); ++i) {
            if (p.steps[i].arrow != p.steps[i + 1].arrow ||
                p.steps[i].forward == p.steps[i + 1].forward)
                continue;
            const auto& a = g.arrows[static_cast<std::size_t>(p.steps[i].arrow)];
            const auto& mid_img = p.steps[i].forward ? a.into_target : a.into_source;
            const auto& out_img = p.steps[i].forward ? a.into_source : a.into_target;
            int mid = p.elements[i + 1];
            int idx = -1;
            for (std::size_t k = 0; k < mid_img.size(); ++k)
                if (mid_img[k] == mid) { idx = static_cast<int>(k); break; }
            if (idx < 0) continue;
            int outv = p.steps[i].forward ? a.source : a.target;
            const auto& grp = g.groups[static_cast<std::size_t>(outv)];
            int merged = grp.mul(grp.mul(p.elements[i], out_img[static_cast<std::size_t>(idx)]),
                                 p.elements[i + 2]);
            p.elements[i] = merged;
            p.elements.erase(p.elements.begin() + static_cast<long>(i) + 1,
                             p.elements.begin() + static_cast<long>(i) + 3);
            p.steps.erase(p.steps.begin() + static_cast<long>(i),
                          p.steps.begin() + static_cast<long>(i) + 2);
            changed = true;
            break;
        }
    }
    return p;
}

} // namespace a1fib
