#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "a1fib/rational.hpp"

namespace a1fib {

// A flat tower of formal radicals over the rationals.  Each generator g_i
// satisfies g_i^{k_i} = base_i, where base_i is an element of the subalgebra
// generated by the earlier generators.  Towers are persistent: adjoining a
// radical produces a longer chain, and values carrying a prefix chain stay
// valid.  No minimal-polynomial factorization is attempted; equality is
// decided on the normal form with exponents reduced by the defining
// relations.
class RadicalScalar;

struct RadicalTower {
    struct Generator {
        int degree;                       // k in g^k = base
        // base in normal form over the *previous* tower: map exponent
        // vector (length = index of this generator) -> rational coefficient
        std::vector<std::pair<std::vector<int>, Rational>> base;
        std::string label;                // printable, e.g. "rt(2,5)"
    };

    std::shared_ptr<const RadicalTower> parent; // one generator shorter
    Generator gen;
    std::size_t depth = 0;                      // number of generators

    static std::shared_ptr<const RadicalTower> extend(
        std::shared_ptr<const RadicalTower> parent, Generator g) {
        auto t = std::make_shared<RadicalTower>();
        t->depth = (parent ? parent->depth : 0) + 1;
        t->parent = std::move(parent);
        t->gen = std::move(g);
        return t;
    }
};

namespace detail {

inline bool tower_is_prefix(const std::shared_ptr<const RadicalTower>& shorter,
                            const std::shared_ptr<const RadicalTower>& longer) {
    auto t = longer;
    while (t) {
        if (t == shorter) return true;
        t = t->parent;
    }
    return shorter == nullptr;
}

inline const RadicalTower::Generator& generator_at(
    const std::shared_ptr<const RadicalTower>& tower, std::size_t idx) {
    auto t = tower;
    while (t && t->depth != idx + 1) t = t->parent;
    if (!t) fail("internal", "radical tower index out of range");
    return t->gen;
}

inline std::vector<std::shared_ptr<const RadicalTower>> tower_chain(
    std::shared_ptr<const RadicalTower> t) {
    std::vector<std::shared_ptr<const RadicalTower>> out;
    while (t) {
        out.push_back(t);
        t = t->parent;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

inline std::map<std::vector<int>, Rational> padded_base(
    const std::vector<std::pair<std::vector<int>, Rational>>& base, std::size_t len) {
    std::map<std::vector<int>, Rational> out;
    for (auto [e, c] : base) {
        e.resize(len, 0);
        auto it = out.find(e);
        if (it == out.end()) out.emplace(std::move(e), c);
        else it->second += c;
    }
    return out;
}

inline bool same_generator(const RadicalTower::Generator& a, const RadicalTower::Generator& b) {
    if (a.degree != b.degree) return false;
    std::size_t len = 0;
    for (const auto& [e, c] : a.base) len = std::max(len, e.size());
    for (const auto& [e, c] : b.base) len = std::max(len, e.size());
    return padded_base(a.base, len) == padded_base(b.base, len);
}

} // namespace detail

class RadicalScalar {
public:
    using Term = std::map<std::vector<int>, Rational>; // exponent vector -> coeff

    RadicalScalar() = default;
    RadicalScalar(int v) : RadicalScalar(Rational(v)) {}
    RadicalScalar(const Rational& v) {
        if (!v.is_zero()) terms_[{}] = v;
    }
    RadicalScalar(std::shared_ptr<const RadicalTower> tower, Term terms)
        : tower_(std::move(tower)), terms_(std::move(terms)) {
        prune();
    }

    const std::shared_ptr<const RadicalTower>& tower() const noexcept { return tower_; }
    const Term& terms() const noexcept { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && exponents_all_zero(terms_.begin()->first) &&
               terms_.begin()->second.is_one();
    }
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && exponents_all_zero(terms_.begin()->first));
    }
    // Defined only when is_rational().
    Rational rational_part() const {
        if (terms_.empty()) return Rational(0);
        if (!is_rational()) fail("not_rational", "scalar involves radicals: " + str());
        return terms_.begin()->second;
    }

    RadicalScalar operator-() const {
        Term t = terms_;
        for (auto& [e, c] : t) c = -c;
        return RadicalScalar(tower_, std::move(t));
    }

    friend RadicalScalar operator+(const RadicalScalar& a, const RadicalScalar& b) {
        auto [tower, ta, tb] = aligned(a, b);
        Term out = ta;
        for (const auto& [e, c] : tb) {
            auto it = out.find(e);
            if (it == out.end()) out.emplace(e, c);
            else {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        return RadicalScalar(tower, std::move(out));
    }
    friend RadicalScalar operator-(const RadicalScalar& a, const RadicalScalar& b) {
        return a + (-b);
    }
    friend RadicalScalar operator*(const RadicalScalar& a, const RadicalScalar& b) {
        auto [tower, ta, tb] = aligned(a, b);
        Term out;
        for (const auto& [ea, ca] : ta)
            for (const auto& [eb, cb] : tb)
                mul_into(out, tower, ea, eb, ca * cb);
        return RadicalScalar(tower, std::move(out));
    }
    friend RadicalScalar operator/(const RadicalScalar& a, const RadicalScalar& b) {
        return a * inverse_of(b);
    }
    RadicalScalar& operator+=(const RadicalScalar& o) { return *this = *this + o; }
    RadicalScalar& operator-=(const RadicalScalar& o) { return *this = *this - o; }
    RadicalScalar& operator*=(const RadicalScalar& o) { return *this = *this * o; }
    RadicalScalar& operator/=(const RadicalScalar& o) { return *this = *this / o; }

    friend bool operator==(const RadicalScalar& a, const RadicalScalar& b) {
        return (a - b).is_zero();
    }

    // Inversion in the finite-dimensional algebra Q[g_1..g_r]/(relations):
    // solve x * y = 1 by exact Gaussian elimination on the multiplication
    // matrix.  Reducible relations can make nonzero elements non-invertible;
    // such zero divisors are reported, not silently mishandled.
    static RadicalScalar inverse_of(const RadicalScalar& x);

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            out += c.str();
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                out += "*" + detail::generator_at(tower_, i).label;
                if (e[i] != 1) out += "^" + std::to_string(e[i]);
            }
        }
        return out;
    }

    // All monomials of the tower as exponent vectors (basis of the algebra).
    static std::vector<std::vector<int>> basis(const std::shared_ptr<const RadicalTower>& tower);

private:
    std::shared_ptr<const RadicalTower> tower_; // may be null (plain rationals)
    Term terms_;

    static bool exponents_all_zero(const std::vector<int>& e) {
        return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }

    // Brings two scalars over a common tower.  Prefix chains lift directly;
    // diverging chains are merged generator by generator, reusing an existing
    // generator whenever degree and base element agree.
    static std::tuple<std::shared_ptr<const RadicalTower>, Term, Term> aligned(
        const RadicalScalar& a, const RadicalScalar& b) {
        if (detail::tower_is_prefix(a.tower_, b.tower_))
            return {b.tower_, lift_prefix(a.terms_, b.tower_), lift_prefix(b.terms_, b.tower_)};
        if (detail::tower_is_prefix(b.tower_, a.tower_))
            return {a.tower_, lift_prefix(a.terms_, a.tower_), lift_prefix(b.terms_, a.tower_)};

        auto chain_a = detail::tower_chain(a.tower_);
        auto chain_b = detail::tower_chain(b.tower_);
        std::size_t p = 0;
        while (p < chain_a.size() && p < chain_b.size() && chain_a[p] == chain_b[p]) ++p;

        auto merged = a.tower_;
        std::vector<std::size_t> map_b(chain_b.size());
        for (std::size_t i = 0; i < p; ++i) map_b[i] = i;
        for (std::size_t i = p; i < chain_b.size(); ++i) {
            RadicalTower::Generator g = chain_b[i]->gen;
            // remap base exponents through map_b
            std::vector<std::pair<std::vector<int>, Rational>> base;
            for (const auto& [e, c] : g.base) {
                std::vector<int> e2(merged ? merged->depth : 0, 0);
                for (std::size_t j = 0; j < e.size(); ++j)
                    if (e[j]) {
                        if (map_b[j] >= e2.size()) e2.resize(map_b[j] + 1, 0);
                        e2[map_b[j]] += e[j];
                    }
                base.emplace_back(std::move(e2), c);
            }
            g.base = std::move(base);
            std::size_t found = std::size_t(-1);
            auto mc = detail::tower_chain(merged);
            for (std::size_t m = 0; m < mc.size(); ++m)
                if (detail::same_generator(mc[m]->gen, g)) { found = m; break; }
            if (found != std::size_t(-1)) {
                map_b[i] = found;
            } else {
                merged = RadicalTower::extend(merged, std::move(g));
                map_b[i] = merged->depth - 1;
            }
        }

        Term tb;
        std::size_t depth = merged ? merged->depth : 0;
        for (const auto& [e, c] : b.terms_) {
            std::vector<int> e2(depth, 0);
            for (std::size_t j = 0; j < e.size(); ++j)
                if (e[j]) e2[map_b[j]] += e[j];
            reduce_into(tb, merged, std::move(e2), c);
        }
        return {merged, lift_prefix(a.terms_, merged), std::move(tb)};
    }

    static Term lift_prefix(const Term& t, const std::shared_ptr<const RadicalTower>& tower) {
        std::size_t depth = tower ? tower->depth : 0;
        Term out;
        for (const auto& [e0, c] : t) {
            auto e = e0;
            e.resize(depth, 0);
            out.emplace(std::move(e), c);
        }
        return out;
    }

    // out += coeff * g^(ea+eb), reducing exponents by the relations.
    static void mul_into(Term& out, const std::shared_ptr<const RadicalTower>& tower,
                         const std::vector<int>& ea, const std::vector<int>& eb,
                         const Rational& coeff) {
        std::size_t depth = tower ? tower->depth : 0;
        std::vector<int> e(depth, 0);
        for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
        for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
        reduce_into(out, tower, std::move(e), coeff);
    }

    static void reduce_into(Term& out, const std::shared_ptr<const RadicalTower>& tower,
                            std::vector<int> e, Rational coeff) {
        for (std::size_t i = e.size(); i-- > 0;) {
            const auto& g = detail::generator_at(tower, i);
            if (e[i] < g.degree) continue;
            e[i] -= g.degree;
            // multiply by the base element (supported on earlier generators)
            for (const auto& [be, bc] : g.base) {
                std::vector<int> e2 = e;
                for (std::size_t j = 0; j < be.size(); ++j) e2[j] += be[j];
                reduce_into(out, tower, std::move(e2), coeff * bc);
            }
            return;
        }
        auto it = out.find(e);
        if (it == out.end()) {
            if (!coeff.is_zero()) out.emplace(std::move(e), coeff);
        } else {
            it->second += coeff;
            if (it->second.is_zero()) out.erase(it);
        }
    }

    friend class RadicalField;
};

inline std::vector<std::vector<int>> RadicalScalar::basis(
    const std::shared_ptr<const RadicalTower>& tower) {
    std::vector<std::vector<int>> out{{}};
    std::vector<int> degrees;
    {
        auto t = tower;
        while (t) {
            degrees.push_back(t->gen.degree);
            t = t->parent;
        }
        std::reverse(degrees.begin(), degrees.end());
    }
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& e : out)
            for (int p = 0; p < degrees[i]; ++p) {
                auto e2 = e;
                e2.resize(i + 1, 0);
                e2[i] = p;
                next.push_back(std::move(e2));
            }
        out = std::move(next);
    }
    for (auto& e : out) e.resize(degrees.size(), 0);
    return out;
}

inline RadicalScalar RadicalScalar::inverse_of(const RadicalScalar& x) {
    if (x.is_zero()) fail("division_by_zero", "inverse of zero");
    if (x.is_rational()) return RadicalScalar(inverse(x.rational_part()));
    auto tower = x.tower_;
    auto bas = basis(tower);
    std::size_t n = bas.size();
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[bas[i]] = i;

    // Column j of M is x * bas[j]; solve M y = e_0.
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1, Rational(0)));
    for (std::size_t j = 0; j < n; ++j) {
        Term col;
        for (const auto& [e, c] : x.terms_) mul_into(col, tower, e, bas[j], c);
        for (const auto& [e, c] : col) m[index.at(e)][j] = c;
    }
    m[0][n] = Rational(1);

    for (std::size_t col = 0, row = 0; col < n && row < n; ++col) {
        std::size_t piv = row;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) continue;
        std::swap(m[piv], m[row]);
        Rational inv = inverse(m[row][col]);
        for (auto& v : m[row]) v *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row || m[r][col].is_zero()) continue;
            Rational f = m[r][col];
            for (std::size_t cc = col; cc <= n; ++cc) m[r][cc] -= f * m[row][cc];
        }
        ++row;
    }
    // back-substitute: matrix is in reduced row-echelon form
    Term result;
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t lead = n;
        for (std::size_t c = 0; c < n; ++c)
            if (!m[r][c].is_zero()) { lead = c; break; }
        if (lead == n) {
            if (!m[r][n].is_zero())
                fail("not_invertible", "zero divisor in radical tower: " + x.str());
            continue;
        }
        if (!m[r][n].is_zero()) result[bas[lead]] = m[r][n];
    }
    RadicalScalar y(tower, std::move(result));
    if (!(y * x).is_one()) fail("not_invertible", "zero divisor in radical tower: " + x.str());
    return y;
}

inline RadicalScalar inverse(const RadicalScalar& a) { return RadicalScalar::inverse_of(a); }
inline std::string to_string(const RadicalScalar& a) { return a.str(); }

// k-th root with automatic adjunction.  Roots of monomials stay monomial
// (possibly after adjoining one fresh generator); roots of genuine sums are
// adjoined as a formal generator over the whole current tower.
inline RadicalScalar radical_kth_root(const RadicalScalar& a, int k) {
    if (k == 1 || a.is_zero()) return a;
    if (a.is_rational()) {
        if (auto r = rational_kth_root(a.rational_part(), k)) return RadicalScalar(*r);
    }
    if (a.terms().size() == 1) {
        // monomial c * g^e: in-field root when c is a perfect power and all
        // exponents divide; otherwise adjoin the root of the monomial.
        const auto& [e, c] = *a.terms().begin();
        bool divisible = std::all_of(e.begin(), e.end(), [&](int x) { return x % k == 0; });
        auto croot = rational_kth_root(c, k);
        if (divisible && croot) {
            std::vector<int> e2 = e;
            for (auto& x : e2) x /= k;
            RadicalScalar::Term t;
            t.emplace(std::move(e2), *croot);
            return RadicalScalar(a.tower(), std::move(t));
        }
    }
    RadicalTower::Generator g;
    g.degree = k;
    for (const auto& [e, c] : a.terms()) g.base.emplace_back(e, c);
    g.label = "rt(" + std::to_string(k) + "," + a.str() + ")";
    // reuse an existing generator with the same defining relation
    auto chain = detail::tower_chain(a.tower());
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (detail::same_generator(chain[i]->gen, g)) {
            RadicalScalar::Term t;
            std::vector<int> e(i + 1, 0);
            e[i] = 1;
            return RadicalScalar(chain[i], std::move(t)) +
                   RadicalScalar(chain[i], RadicalScalar::Term{{std::move(e), Rational(1)}});
        }
    }
    auto tower = RadicalTower::extend(a.tower(), std::move(g));
    RadicalScalar::Term t;
    std::vector<int> e(tower->depth, 0);
    e.back() = 1;
    t.emplace(std::move(e), Rational(1));
    return RadicalScalar(tower, std::move(t));
}

} // namespace a1fib
