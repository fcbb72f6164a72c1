#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "a1fib/field.hpp"

namespace a1fib {

// Truncation orders.  `kExact` marks a polynomial known exactly; finite M
// means the series is known modulo t^M.
inline constexpr std::size_t kExact = std::numeric_limits<std::size_t>::max();

// Formal power series over an exact field, truncated at an explicit order.
// Operations never claim coefficients beyond what the inputs determine.
template <ExactField F>
class Series {
public:
    Series() = default;
    explicit Series(std::vector<F> coeffs, std::size_t trunc = kExact)
        : c_(std::move(coeffs)), trunc_(trunc) {
        clamp();
    }

    static Series zero() { return Series({}, kExact); }
    static Series constant(const F& v) { return Series({v}, kExact); }
    static Series identity() { return Series({F(0), F(1)}, kExact); } // the series t
    static Series monomial(std::size_t k, const F& v) {
        std::vector<F> c(k + 1, F(0));
        c[k] = v;
        return Series(std::move(c), kExact);
    }

    std::size_t truncation() const noexcept { return trunc_; }
    bool exact() const noexcept { return trunc_ == kExact; }
    const std::vector<F>& coeffs() const noexcept { return c_; }

    F coeff(std::size_t i) const {
        if (i >= trunc_) fail("truncation_exceeded", "coefficient beyond truncation order");
        return i < c_.size() ? c_[i] : F(0);
    }

    bool is_zero() const {
        for (const auto& v : c_)
            if (!v.is_zero()) return false;
        return true;
    }

    // Order (valuation); nullopt when the series is zero as far as known.
    std::optional<std::size_t> order() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return i;
        return std::nullopt;
    }

    // View modulo t^m.  An exact polynomial of degree < m stays exact.
    Series truncated(std::size_t m) const {
        if (trunc_ == kExact && c_.size() <= m) return *this;
        std::vector<F> c(c_.begin(), c_.begin() + std::min<std::size_t>(m, c_.size()));
        return Series(std::move(c), std::min(trunc_, m));
    }

    Series operator-() const {
        auto c = c_;
        for (auto& v : c) v = -v;
        return Series(std::move(c), trunc_);
    }

    friend Series operator+(const Series& a, const Series& b) {
        std::size_t tr = std::min(a.trunc_, b.trunc_);
        std::vector<F> c(std::max(a.c_.size(), b.c_.size()), F(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i < a.c_.size()) c[i] += a.c_[i];
            if (i < b.c_.size()) c[i] += b.c_[i];
        }
        return Series(std::move(c), tr);
    }
    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    friend Series operator*(const Series& a, const Series& b) {
        // valuation shifts extend the reliable window
        std::size_t va = a.order().value_or(a.c_.size());
        std::size_t vb = b.order().value_or(b.c_.size());
        std::size_t tr = kExact;
        if (a.trunc_ != kExact) tr = std::min(tr, sat_add(a.trunc_, vb));
        if (b.trunc_ != kExact) tr = std::min(tr, sat_add(b.trunc_, va));
        std::size_t n = a.c_.size() + b.c_.size();
        n = std::min<std::size_t>(n, tr == kExact ? n : tr);
        std::vector<F> c(n, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size() && i + j < n; ++j) {
                if (b.c_[j].is_zero()) continue;
                c[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return Series(std::move(c), tr);
    }

    Series scaled(const F& s) const {
        auto c = c_;
        for (auto& v : c) v = v * s;
        return Series(std::move(c), trunc_);
    }

    // Coefficient equality on the stored window; truncation is metadata.
    friend bool operator==(const Series& a, const Series& b) {
        std::size_t n = std::max(a.c_.size(), b.c_.size());
        for (std::size_t i = 0; i < n; ++i) {
            F av = i < a.c_.size() ? a.c_[i] : F(0);
            F bv = i < b.c_.size() ? b.c_[i] : F(0);
            if (!(av == bv)) return false;
        }
        return true;
    }

    std::string str() const {
        std::string out = "[";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) out += ", ";
            out += to_string(c_[i]);
        }
        out += "]";
        if (trunc_ != kExact) out += " mod t^" + std::to_string(trunc_);
        return out;
    }

private:
    std::vector<F> c_;
    std::size_t trunc_ = kExact;

    static std::size_t sat_add(std::size_t a, std::size_t b) {
        return (a == kExact || b == kExact) ? kExact : a + b;
    }

    void clamp() {
        if (trunc_ != kExact && c_.size() > trunc_) c_.resize(trunc_);
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
};

// f(g) for g with zero constant term.
template <ExactField F>
Series<F> compose(const Series<F>& f, const Series<F>& g) {
    if (!g.coeffs().empty() && !g.coeffs()[0].is_zero())
        fail("bad_composition", "inner series must have zero constant term");
    std::size_t vg = g.order().value_or(g.coeffs().empty() ? 1 : g.coeffs().size());
    if (vg == 0) vg = 1;
    // reliable window: f-truncation scales by ord g; g-truncation enters via
    // the first power of g whose tail can matter
    std::size_t tr = kExact;
    if (f.truncation() != kExact)
        tr = std::min(tr, f.truncation() * vg);
    if (g.truncation() != kExact) {
        std::size_t vf = f.order().value_or(f.coeffs().size());
        std::size_t shift = vf > 0 ? (vf - 1) * vg : 0;
        tr = std::min(tr, g.truncation() + shift);
    }
    Series<F> acc = Series<F>::zero();
    Series<F> power = Series<F>::constant(F(1));
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (!f.coeffs()[i].is_zero()) acc = acc + power.scaled(f.coeffs()[i]);
        power = power * g;
        if (tr != kExact) power = power.truncated(tr);
        if (power.is_zero() && power.exact()) break;
    }
    return tr == kExact ? acc : acc.truncated(tr);
}

// Multiplicative inverse of a unit series, to order m.
template <ExactField F>
Series<F> unit_inverse(const Series<F>& u, std::size_t m) {
    if (u.coeffs().empty() || u.coeffs()[0].is_zero())
        fail("not_a_unit", "series has zero constant term");
    F c0inv = inverse(u.coeffs()[0]);
    std::vector<F> v(m, F(0));
    v[0] = c0inv;
    for (std::size_t i = 1; i < m; ++i) {
        F s(0);
        for (std::size_t j = 1; j <= i; ++j) {
            F uj = j < u.coeffs().size() ? u.coeffs()[j] : F(0);
            if (!uj.is_zero()) s += uj * v[i - j];
        }
        v[i] = -(s * c0inv);
    }
    return Series<F>(std::move(v), std::min(m, u.truncation()));
}

// v with v^k = u, for a unit u.  The constant term is the principal k-th
// root chosen by the field (adjoined when the field supports it).
template <ExactField F>
Series<F> unit_root(const Series<F>& u, int k, std::size_t m) {
    if (u.coeffs().empty() || u.coeffs()[0].is_zero())
        fail("not_a_unit", "k-th root needs a nonzero constant term");
    F r0 = kth_root(u.coeffs()[0], k);
    std::vector<F> v(m, F(0));
    v[0] = r0;
    // (v^k)_i = u_i solved triangularly: k r0^{k-1} v_i = u_i - (lower terms)
    F lead = F(1);
    for (int j = 0; j < k - 1; ++j) lead = lead * r0;
    F denom = inverse(lead * F(k));
    for (std::size_t i = 1; i < m; ++i) {
        // compute coefficient i of v^k with v_i set to 0
        Series<F> vi(std::vector<F>(v.begin(), v.begin() + i), kExact);
        Series<F> p = Series<F>::constant(F(1));
        for (int j = 0; j < k; ++j) p = (p * vi).truncated(i + 1);
        F have = i < p.coeffs().size() ? p.coeffs()[i] : F(0);
        F want = i < u.coeffs().size() ? u.coeffs()[i] : F(0);
        v[i] = (want - have) * denom;
    }
    return Series<F>(std::move(v), std::min(m, u.truncation()));
}

// Compositional inverse of g (ord g = 1), to order m.
template <ExactField F>
Series<F> reversion(const Series<F>& g, std::size_t m) {
    auto og = g.order();
    if (!og || *og != 1) fail("bad_reversion", "series must have order exactly 1");
    F a1 = g.coeff(1);
    F a1inv = inverse(a1);
    std::vector<F> h(m, F(0));
    if (m > 1) h[1] = a1inv;
    for (std::size_t i = 2; i < m; ++i) {
        // require [t^i] g(h(t)) = 0; the a1*h_i term is the only unknown
        Series<F> hi(std::vector<F>(h.begin(), h.begin() + i), kExact);
        Series<F> comp = compose(g.truncated(i + 1), hi).truncated(i + 1);
        F have = i < comp.coeffs().size() ? comp.coeffs()[i] : F(0);
        h[i] = -(have * a1inv);
    }
    return Series<F>(std::move(h), m);
}

// Solves t(s)^n * psi(t(s)) = s^{n+m} for t(s) with ord t = 1, where
// m = ord psi.  Returns (t(s) mod s^order, n+m).  Needs an (n+m)-th root of
// the leading coefficient of psi.
template <ExactField F>
std::pair<Series<F>, std::size_t> solve_substitution(const Series<F>& psi, std::size_t n,
                                                     std::size_t order) {
    auto om = psi.order();
    if (!om) fail("bad_input", "psi must be nonzero");
    if (*om == 0) fail("bad_input", "psi must have zero constant term");
    std::size_t m = *om;
    std::size_t big_n = n + m;
    // G(t) = t^n psi(t) = c t^N (1 + ...); with t = s*u: c u^N U(s u...) = 1
    // where U is the unit part of G.  Solve u triangularly.
    std::vector<F> unit(psi.coeffs().begin() + m, psi.coeffs().end());
    Series<F> u_part(std::move(unit),
                     psi.truncation() == kExact ? kExact : psi.truncation() - m);
    F c = u_part.coeffs()[0];
    F r = kth_root(inverse(c), static_cast<int>(big_n));
    std::vector<F> u(order, F(0));
    u[0] = r;
    F lead = F(1);
    for (std::size_t j = 0; j + 1 < big_n; ++j) lead = lead * r;
    F denom = inverse(lead * F(static_cast<long long>(big_n)) * c);
    for (std::size_t i = 1; i < order; ++i) {
        // residual with u_i = 0: coefficient of s^i in c*u(s)^N*Unit(s*u(s)) - 1
        Series<F> ui(std::vector<F>(u.begin(), u.begin() + i), kExact);
        Series<F> t_of_s = (Series<F>::identity() * ui).truncated(i + 1);
        Series<F> val = compose(u_part.truncated(i + 1), t_of_s);
        Series<F> upow = Series<F>::constant(F(1));
        for (std::size_t j = 0; j < big_n; ++j) upow = (upow * ui).truncated(i + 1);
        Series<F> res = (upow * val).truncated(i + 1);
        F have = i < res.coeffs().size() ? res.coeffs()[i] : F(0);
        u[i] = -(have * denom);
    }
    Series<F> t_of_s = (Series<F>::identity() * Series<F>(std::move(u), order)).truncated(order);
    return {t_of_s, big_n};
}

} // namespace a1fib
