#pragma once

#include <optional>
#include <string>
#include <vector>

#include "a1fib/weighted_tree.hpp"

namespace a1fib {

// A zigzag: an integer-weighted chain recorded as its ordered weight list.
struct Zigzag {
    std::vector<BigInt> w;

    std::size_t size() const { return w.size(); }
    bool empty() const { return w.empty(); }

    friend bool operator==(const Zigzag& a, const Zigzag& b) { return a.w == b.w; }

    std::string str() const {
        std::string out = "[[";
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i) out += ",";
            out += w[i].str();
        }
        return out + "]]";
    }

    WeightedTree as_tree() const {
        WeightedTree t;
        for (std::size_t i = 0; i < w.size(); ++i)
            t.vertices.push_back({static_cast<int>(i), w[i], Role::plain});
        for (std::size_t i = 0; i + 1 < w.size(); ++i)
            t.edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
        return t;
    }

    // Standard form predicate: head [[0,0]] with admissible tail, or an
    // all-zero chain of length at most four.
    bool is_standard() const {
        if (w.size() >= 2 && w[0] == 0 && w[1] == 0) {
            bool tail_ok = true;
            for (std::size_t i = 2; i < w.size(); ++i)
                if (w[i] > -2) { tail_ok = false; break; }
            if (tail_ok) return true;
        }
        bool all_zero = std::all_of(w.begin(), w.end(), [](const BigInt& x) { return x == 0; });
        return all_zero && !w.empty() && w.size() <= 4;
    }
};

enum class Side { left, right };

// Replayable moves on a chain.  blowup/blowdown change the length; elem and
// elem_end are the weight-shifting blowup+blowdown composites; the last two
// are the normal-form tie-break steps.
struct ZigzagMove {
    enum class Kind {
        blowup_edge,   // between arg and arg+1; both lose 1, a (-1) appears between
        blowup_end,    // side: new (-1) vertex outside that end, end loses 1
        blowdown,      // at arg (weight -1); neighbors gain 1
        elem,          // at zero vertex arg; the `side` neighbor loses 1, the other gains 1
        elem_end,      // at zero end vertex arg; side = blowup side (free side: neighbor
                       // gains 1; neighbor side: neighbor loses 1)
        reverse_tail,  // [[0..0,A]] -> [[0..0,reverse A]] (reversion)
        reverse_reading // relabel the chain from the other end
    };
    Kind kind;
    std::size_t arg = 0;
    Side side = Side::left;
};

inline void apply_move(std::vector<BigInt>& w, const ZigzagMove& m) {
    std::size_t n = w.size();
    auto expect = [&](bool ok, const char* what) {
        if (!ok) fail("bad_move", what);
    };
    switch (m.kind) {
        case ZigzagMove::Kind::blowup_edge:
            expect(m.arg + 1 < n, "edge out of range");
            w[m.arg] -= 1;
            w[m.arg + 1] -= 1;
            w.insert(w.begin() + m.arg + 1, BigInt(-1));
            break;
        case ZigzagMove::Kind::blowup_end:
            expect(n >= 1, "empty chain");
            if (m.side == Side::left) {
                w.front() -= 1;
                w.insert(w.begin(), BigInt(-1));
            } else {
                w.back() -= 1;
                w.push_back(BigInt(-1));
            }
            break;
        case ZigzagMove::Kind::blowdown:
            expect(m.arg < n && w[m.arg] == -1, "not a (-1)-vertex");
            if (m.arg > 0) w[m.arg - 1] += 1;
            if (m.arg + 1 < n) w[m.arg + 1] += 1;
            w.erase(w.begin() + m.arg);
            break;
        case ZigzagMove::Kind::elem: {
            expect(m.arg < n && w[m.arg] == 0, "elem needs a zero vertex");
            expect(m.arg > 0 && m.arg + 1 < n, "elem needs two neighbors");
            std::size_t lose = m.side == Side::left ? m.arg - 1 : m.arg + 1;
            std::size_t gain = m.side == Side::left ? m.arg + 1 : m.arg - 1;
            w[lose] -= 1;
            w[gain] += 1;
            break;
        }
        case ZigzagMove::Kind::elem_end: {
            expect(m.arg < n && w[m.arg] == 0, "elem_end needs a zero vertex");
            expect(m.arg == 0 || m.arg + 1 == n, "elem_end needs an end vertex");
            if (n == 1) break; // blowup at the free point then contract: identity
            bool left_end = m.arg == 0;
            std::size_t nbr = left_end ? 1 : n - 2;
            bool free_side = (left_end && m.side == Side::left) ||
                             (!left_end && m.side == Side::right);
            w[nbr] += free_side ? 1 : -1;
            break;
        }
        case ZigzagMove::Kind::reverse_tail: {
            expect(n >= 2, "reverse_tail needs a zero pair");
            std::size_t j = 0;
            while (j < n && w[j] == 0) ++j;
            std::reverse(w.begin() + j, w.end());
            break;
        }
        case ZigzagMove::Kind::reverse_reading:
            std::reverse(w.begin(), w.end());
            break;
    }
}

// The public elementary transformation: blow up on the chosen side of a
// zero vertex and contract the old vertex.  At an inner vertex the chosen
// neighbor loses one and the opposite neighbor gains one; at an end vertex
// the free side is the forward move of the second displayed rule.
inline Zigzag elementary_transform(const Zigzag& z, std::size_t index, Side side) {
    if (index >= z.size()) fail("bad_index", "vertex index out of range");
    if (z.w[index] != 0) fail("not_applicable", "elementary transformation needs weight 0");
    Zigzag out = z;
    bool is_end = index == 0 || index + 1 == z.size();
    ZigzagMove m{is_end ? ZigzagMove::Kind::elem_end : ZigzagMove::Kind::elem, index, side};
    apply_move(out.w, m);
    return out;
}

struct StandardizeResult {
    Zigzag standard;
    Zigzag reversed_form; // the other representative of the reversion pair
    std::vector<ZigzagMove> log;
};

namespace detail {

struct ZigzagRewriter {
    std::vector<BigInt> w;
    std::vector<ZigzagMove> log;

    void move(ZigzagMove m) {
        apply_move(w, m);
        log.push_back(m);
    }
    void elem(std::size_t i, Side s) { move({ZigzagMove::Kind::elem, i, s}); }
    void elem_end(std::size_t i, Side s) { move({ZigzagMove::Kind::elem_end, i, s}); }

    bool step_positive() {
        std::size_t n = w.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] <= 0) continue;
            if (i + 1 == n) move({ZigzagMove::Kind::blowup_end, 0, Side::right});
            else if (i == 0) move({ZigzagMove::Kind::blowup_end, 0, Side::left});
            else move({ZigzagMove::Kind::blowup_edge, i, Side::left});
            return true;
        }
        return false;
    }

    // leftmost zero with a nonzero entry to its left moves one slot left
    bool step_displaced_zero() {
        std::size_t n = w.size();
        bool seen_nonzero = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (w[i] != 0) { seen_nonzero = true; continue; }
            if (!seen_nonzero) continue;
            BigInt a = w[i - 1]; // nonzero, negative here
            if (i + 1 == n)
                for (BigInt k = 0; k < -a; ++k) elem_end(i, Side::right);
            else
                for (BigInt k = 0; k < -a; ++k) elem(i, Side::right);
            return true;
        }
        return false;
    }

    // prefix of zeros followed by a tail of negatives
    std::size_t zero_prefix() const {
        std::size_t j = 0;
        while (j < w.size() && w[j] == 0) ++j;
        return j;
    }

    // +1 sent from the left end rightward through the zero prefix onto w[j]
    void pump_wave(std::size_t j) {
        elem_end(0, Side::left);
        for (std::size_t k = 2; k < j; k += 2) elem(k, Side::left);
    }

    // inverse wave: removes the +1 sitting at odd position p inside the prefix
    void unpump_wave(std::size_t p) {
        for (std::size_t k = p; k >= 2; k -= 2) elem(k - 1 + 1, Side::right);
        elem_end(0, Side::right);
    }

    // zero pair at (p, p+1) moves one slot right past the entry at p+2
    void pair_shift_right(std::size_t p) {
        BigInt b = w[p + 2];
        for (BigInt k = 0; k < -b; ++k) elem(p + 1, Side::left);
    }

    bool step_tail() {
        std::size_t n = w.size(), j = zero_prefix();
        if (j == n) return false; // all zeros: normal form
        if (j == 0) {
            if (n == 1) return false;
            for (std::size_t i = 0; i < n; ++i)
                if (w[i] == -1) {
                    move({ZigzagMove::Kind::blowdown, i, Side::left});
                    return true;
                }
            return false; // admissible: normal form
        }
        if (j % 2 == 1) {
            // odd zero prefix absorbs the tail head
            pump_wave(j);
            return true;
        }
        // even prefix: eliminate the leftmost (-1) in the tail, if any
        std::size_t pos = n;
        for (std::size_t i = j; i < n; ++i)
            if (w[i] == -1) { pos = i; break; }
        if (pos == n) return false; // admissible tail: normal form
        std::size_t shifts = pos - j;
        for (std::size_t s = 0; s < shifts; ++s) pair_shift_right(j - 2 + s);
        // pair now at (pos-2, pos-1), the (-1) at pos
        move({ZigzagMove::Kind::blowdown, pos, Side::left});
        // a +1 remains at pos-1; cancel it against the pair / the prefix
        if (shifts > 0) {
            elem(pos - 2, Side::right);
        } else if (j == 2) {
            elem_end(0, Side::right);
        } else {
            // +1 at j-1 deep in the prefix: walk it back to the end
            for (std::size_t k = j - 2; k >= 2; k -= 2) elem(k, Side::right);
            elem_end(0, Side::right);
        }
        return true;
    }

    void run() {
        // terminates: positives shrink, then the nonzero count and the
        // zero displacement shrink lexicographically
        for (std::size_t guard = 0;; ++guard) {
            if (guard > 100000) fail("internal", "standardize did not terminate");
            if (step_positive()) continue;
            if (step_displaced_zero()) continue;
            if (step_tail()) continue;
            break;
        }
    }
};

inline std::vector<BigInt> reversed_candidate(const std::vector<BigInt>& w) {
    std::size_t j = 0;
    while (j < w.size() && w[j] == 0) ++j;
    auto out = w;
    if (j == 0)
        std::reverse(out.begin(), out.end());
    else
        std::reverse(out.begin() + j, out.end());
    return out;
}

} // namespace detail

// Deterministic canonical form.  For classes containing a zero-pair head the
// result is the standard [[0,0,...]] form; admissible chains come back
// contracted; ties between a form and its reversion go to the
// lexicographically smaller weight list.
inline StandardizeResult standardize(const Zigzag& z) {
    if (z.empty()) fail("bad_input", "empty zigzag");
    detail::ZigzagRewriter rw;
    rw.w = z.w;
    rw.run();
    auto rev = detail::reversed_candidate(rw.w);
    StandardizeResult res;
    if (std::lexicographical_compare(rev.begin(), rev.end(), rw.w.begin(), rw.w.end())) {
        std::size_t j = 0;
        while (j < rw.w.size() && rw.w[j] == 0) ++j;
        rw.move({j == 0 ? ZigzagMove::Kind::reverse_reading : ZigzagMove::Kind::reverse_tail,
                 0, Side::left});
    }
    res.standard = Zigzag{rw.w};
    res.reversed_form = Zigzag{detail::reversed_candidate(rw.w)};
    res.log = std::move(rw.log);
    return res;
}

inline Zigzag replay(const Zigzag& z, const std::vector<ZigzagMove>& log) {
    Zigzag out = z;
    for (const auto& m : log) apply_move(out.w, m);
    return out;
}

// Reversion of a standard zigzag: the tail weights reverse.
inline Zigzag revert(const Zigzag& z) {
    if (!z.is_standard()) fail("not_standard", "revert needs a standard zigzag");
    Zigzag out = z;
    if (out.size() > 2) std::reverse(out.w.begin() + 2, out.w.end());
    return out;
}

enum class MLClass { ML0, ML1, ML2 };

inline const char* ml_name(MLClass c) {
    switch (c) {
        case MLClass::ML0: return "ML0";
        case MLClass::ML1: return "ML1";
        case MLClass::ML2: return "ML2";
    }
    return "ML0";
}

// Classification of a minimal boundary graph by the shape of its extremal
// linear segments; chains are classified by their standard form.
inline MLClass ml_class(const WeightedTree& g, bool minimal = true) {
    (void)minimal; // minimality of the completion is the caller's contract
    if (g.vertices.empty()) fail("bad_input", "empty boundary graph");
    if (g.is_chain()) {
        Zigzag z;
        for (int id : g.chain_order()) z.w.push_back(g.vertex(id).weight);
        auto st = standardize(z).standard;
        bool zzz = st.size() == 3 && st.w[0] == 0 && st.w[1] == 0 && st.w[2] == 0;
        return zzz ? MLClass::ML1 : MLClass::ML0;
    }
    // split off rupture vertices (degree >= 3), look at segments containing
    // a leaf of the tree
    std::set<int> rupture;
    for (const auto& v : g.vertices)
        if (g.degree(v.id) >= 3) rupture.insert(v.id);
    std::set<int> seen;
    bool all_extremal_admissible = true;
    for (const auto& v : g.vertices) {
        if (rupture.count(v.id) || seen.count(v.id)) continue;
        // flood the segment
        std::vector<int> comp, stack{v.id};
        bool extremal = false, admissible = true;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            if (seen.count(x) || rupture.count(x)) continue;
            seen.insert(x);
            comp.push_back(x);
            if (g.degree(x) == 1) extremal = true;
            if (g.vertex(x).weight > -2) admissible = false;
            for (int y : g.neighbors(x))
                if (!rupture.count(y)) stack.push_back(y);
        }
        if (extremal && !admissible) all_extremal_admissible = false;
    }
    return all_extremal_admissible ? MLClass::ML2 : MLClass::ML1;
}

} // namespace a1fib
