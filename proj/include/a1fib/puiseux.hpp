#pragma once

#include <numeric>

#include "a1fib/fiber_tower.hpp"
#include "a1fib/series.hpp"

namespace a1fib {

// The combinatorial core of a Puiseux arc space: arcs equivalent to
// (t^n, psi(t) + O(t^d)) under invertible reparameterization.
template <ExactField F>
struct PuiData {
    Series<F> psi; // exact polynomial, degree < d
    std::size_t n = 1;
    std::size_t d = 1;
};

// gcd({ i >= 1 : psi_i != 0 } u {n}) — the constant term names the center
// and does not enter the condition.
template <ExactField F>
std::size_t puiseux_gcd(const PuiData<F>& w) {
    std::size_t g = w.n;
    for (std::size_t i = 1; i < w.psi.coeffs().size(); ++i)
        if (!w.psi.coeffs()[i].is_zero()) g = std::gcd(g, i);
    return g;
}

template <ExactField F>
void validate_puiseux(const PuiData<F>& w) {
    if (w.n < 1 || w.d < 1) fail("bad_input", "puiseux space needs positive n and d");
    if (w.psi.coeffs().size() > w.d) fail("bad_input", "psi must have degree < d");
    if (puiseux_gcd(w) != 1)
        fail("bad_input", "gcd condition violated for Pui(" + w.psi.str() + "," +
                              std::to_string(w.n) + "," + std::to_string(w.d) + ")");
}

// A Puiseux arc space together with its center: either expressed in base
// coordinates (the constant term of psi names the root-component point) or
// attached at a point of the fiber configuration.
template <ExactField F>
struct PuiseuxSpace {
    PuiData<F> data;
    bool base = true;
    int comp = 0;        // attached form: component id
    Coord<F> at{};       // attached form: coordinate on that component
    std::optional<F> fiber; // base point of the fiber the space came from

    const Series<F>& psi() const { return data.psi; }
    std::size_t n() const { return data.n; }
    std::size_t d() const { return data.d; }
    F base_center() const {
        if (!base) fail("bad_input", "space is not in base form");
        return data.psi.coeffs().empty() ? F(0) : data.psi.coeffs()[0];
    }
};

// finite-coordinate descent: Pui(psi,n,d) at T_i(q) -> Pui(t^n (q+psi), n, d+n)
template <ExactField F>
PuiData<F> descend_finite_data(const PuiData<F>& w, const F& q) {
    std::vector<F> c(w.n, F(0));
    c.push_back(q);
    for (std::size_t i = 1; i < w.psi.coeffs().size(); ++i) c.push_back(w.psi.coeffs()[i]);
    if (!w.psi.coeffs().empty()) c[w.n] = c[w.n] + w.psi.coeffs()[0];
    Series<F> psi(std::move(c), kExact);
    return {psi, w.n, w.d + w.n};
}

// Optional global raise of the working series order (the automatic orders
// are already sufficient; this is a user-facing knob).
inline std::size_t& truncation_override() {
    static thread_local std::size_t v = 0;
    return v;
}

// node descent: Pui(psi,n,d) at T_i(inf) -> Pui(psi~, n + ord psi, d) where
// t(s)^n psi(t(s)) = s^{n + ord psi} and psi~ = psi(t(s)) mod s^d
template <ExactField F>
PuiData<F> descend_infinite_data(const PuiData<F>& w, std::size_t working_order = 0) {
    auto ord = w.psi.order();
    if (!ord || *ord == 0)
        fail("degenerate_at_node", "node descent needs psi in t*K[t], psi != 0");
    std::size_t m = *ord;
    std::size_t order = std::max({working_order, truncation_override(), w.d + w.n + m + 4});
    auto [t_of_s, new_n] = solve_substitution(w.psi, w.n, order);
    Series<F> psi_t = compose(w.psi, t_of_s).truncated(w.d);
    PuiData<F> out{Series<F>(psi_t.coeffs(), kExact), new_n, w.d};
    if (out.psi.order() != ord)
        fail("internal", "node descent must preserve the order of psi");
    if (puiseux_gcd(out) != 1) fail("internal", "node descent broke the gcd condition");
    return out;
}

// One descent step of an attached space through the blowup that created its
// component; the new center comes from the tower.
template <ExactField F>
PuiseuxSpace<F> descend_step(const FiberModel<F>& model, const PuiseuxSpace<F>& w) {
    if (w.base) fail("wrong_case", "space already in base coordinates");
    if (w.comp == 0) {
        // landing on the root component: add the constant naming the center
        PuiseuxSpace<F> out;
        if (w.at.inf) fail("wrong_case", "the root component meets S at infinity");
        std::vector<F> c = w.data.psi.coeffs();
        if (c.empty()) c.push_back(F(0));
        c[0] = c[0] + w.at.q;
        out.data = {Series<F>(std::move(c), kExact), w.data.n, w.data.d};
        out.base = true;
        return out;
    }
    const auto& center = model.center_of(w.comp);
    PuiseuxSpace<F> out;
    out.base = false;
    out.comp = center.comp;
    out.at = center.at_infinity ? Coord<F>::infinity() : Coord<F>::finite(center.q);
    out.data = w.at.inf ? descend_infinite_data(w.data) : descend_finite_data(w.data, w.at.q);
    return out;
}

// Single-step descent entry points with explicit case checks.
template <ExactField F>
PuiseuxSpace<F> descend_finite(const FiberModel<F>& model, const PuiseuxSpace<F>& w) {
    if (w.base || w.at.inf) fail("wrong_case", "finite descent needs a finite attached center");
    return descend_step(model, w);
}
template <ExactField F>
PuiseuxSpace<F> descend_infinite(const FiberModel<F>& model, const PuiseuxSpace<F>& w) {
    if (w.base || !w.at.inf) fail("wrong_case", "node descent needs a center at infinity");
    return descend_step(model, w);
}

// The Puiseux arc space of a smooth fiber point, expressed in base
// coordinates by descending through the whole tower.
template <ExactField F>
PuiseuxSpace<F> pui_of_point(const FiberModel<F>& model, int comp, const Coord<F>& at) {
    if (comp < 0 || static_cast<std::size_t>(comp) >= model.components.size())
        fail("bad_component", "no such component");
    if (comp == 0 && at.inf) fail("center_on_section", "that point lies on S");
    if (model.node_at(comp, at))
        fail("degenerate_at_node", "seed point is a node of the fiber");
    PuiseuxSpace<F> w;
    w.base = false;
    w.comp = comp;
    w.at = at;
    w.data = {Series<F>::zero(), 1, 1};
    while (!w.base) w = descend_step(model, w);
    w.fiber = model.base_point;
    validate_puiseux(w.data);
    return w;
}

// multiplicity of a space in base form
template <ExactField F>
std::size_t multiplicity(const PuiseuxSpace<F>& w) {
    if (!w.base) fail("bad_input", "multiplicity is read off the base form");
    return w.data.n;
}

// Arcs as truncated coordinate pairs in a local chart.
template <ExactField F>
struct Arc {
    Series<F> x, y;
};

// multiplicity of an arc at a smooth point of a component
template <ExactField F>
BigInt arc_multiplicity(const FiberModel<F>& model, int comp, const Arc<F>& h) {
    auto ox = h.x.order();
    if (!ox) fail("arc_in_fiber", "arc runs inside the fiber");
    return model.component(comp).multiplicity * BigInt(static_cast<long long>(*ox));
}

// multiplicity of an arc at a node: the chart vanishes on the section-side
// component in x and on the far component in y
template <ExactField F>
BigInt arc_multiplicity_at_node(const FiberModel<F>& model, int node_id, const Arc<F>& h) {
    const auto& nd = model.nodes.at(static_cast<std::size_t>(node_id));
    auto ox = h.x.order(), oy = h.y.order();
    if (!ox || !oy) fail("arc_in_fiber", "arc runs inside the fiber");
    return model.component(nd.s_side).multiplicity * BigInt(static_cast<long long>(*ox)) +
           model.component(nd.far_side).multiplicity * BigInt(static_cast<long long>(*oy));
}

// psi = psi_reg(t^n) + psi_sing(t): the singular part collects exactly the
// monomials with exponent not divisible by n.
template <ExactField F>
std::pair<Series<F>, Series<F>> split_reg_sing(const Series<F>& psi, std::size_t n) {
    std::vector<F> reg, sing;
    for (std::size_t i = 0; i < psi.coeffs().size(); ++i) {
        if (i % n == 0) {
            reg.resize(i / n + 1, F(0));
            reg[i / n] = psi.coeffs()[i];
        } else {
            sing.resize(i + 1, F(0));
            sing[i] = psi.coeffs()[i];
        }
    }
    return {Series<F>(std::move(reg), kExact), Series<F>(std::move(sing), kExact)};
}

namespace detail {

inline std::pair<long long, long long> ext_gcd(long long a, long long b) {
    if (b == 0) return {1, 0};
    auto [x, y] = ext_gcd(b, a % b);
    return {y, x - (a / b) * y};
}

template <ExactField F>
F field_pow(const F& base, long long e) {
    if (e < 0) return inverse(field_pow(base, -e));
    F r(1);
    for (long long k = 0; k < e; ++k) r = r * base;
    return r;
}

} // namespace detail

// Do two coefficient streams agree up to the n-th-root-of-unity twist
// b_i -> z^i b_i?  The gcd condition pins down the candidate z inside the
// field, so the test is exact.
template <ExactField F>
bool twist_equivalent(const std::vector<F>& a, const std::vector<F>& b, std::size_t n,
                      std::size_t d) {
    auto coeff = [](const std::vector<F>& v, std::size_t i) {
        return i < v.size() ? v[i] : F(0);
    };
    std::vector<std::size_t> support;
    for (std::size_t i = 1; i < d; ++i) {
        bool az = coeff(a, i).is_zero(), bz = coeff(b, i).is_zero();
        if (az != bz) return false;
        if (!az) support.push_back(i);
    }
    if (!(coeff(a, 0) == coeff(b, 0))) return false;
    if (support.empty()) return true;
    // solve z from z^g = known products, g = gcd(support u {n})
    long long g = static_cast<long long>(n);
    for (auto i : support) g = std::gcd(g, static_cast<long long>(i));
    if (g != 1) fail("needs_roots_of_unity", "gcd condition fails; twist not determined");
    // Bezout: 1 = sum c_i * i + c_n * n over the support
    // iterate: maintain (g, expression of g as power product of ratios)
    F val = F(1); // z^g_cur as a field element
    long long g_cur = static_cast<long long>(n);
    for (auto i : support) {
        F ratio = coeff(a, i) * inverse(coeff(b, i)); // z^i
        long long ii = static_cast<long long>(i);
        long long g_next = std::gcd(g_cur, ii);
        auto [cx, cy] = detail::ext_gcd(g_cur, ii);
        // z^{g_next} = (z^{g_cur})^{cx} * (z^{i})^{cy}
        val = detail::field_pow(val, cx) * detail::field_pow(ratio, cy);
        g_cur = g_next;
        if (g_cur == 1) break;
    }
    if (g_cur != 1) fail("needs_roots_of_unity", "twist exponent not reachable");
    F z = val;
    // verify z^n = 1 and the full twist
    F zn = F(1);
    for (std::size_t k = 0; k < n; ++k) zn = zn * z;
    if (!zn.is_one()) return false;
    F zi = F(1);
    for (std::size_t i = 1; i < d; ++i) {
        zi = zi * z;
        if (!(coeff(a, i) == zi * coeff(b, i))) return false;
    }
    return true;
}

// Equality of Puiseux arc spaces (same n, d, and psi up to the twist).
template <ExactField F>
bool same_space(const PuiData<F>& a, const PuiData<F>& b) {
    if (a.n != b.n || a.d != b.d) return false;
    return twist_equivalent(a.psi.coeffs(), b.psi.coeffs(), a.n, a.d);
}

// Membership of an arc in Pui(psi,n,d) read in the same local chart: the
// x-coordinate is normalized to t^n and the y-data compared mod t^d up to
// the root-of-unity twist.
template <ExactField F>
bool arc_in_space(const Arc<F>& h, const PuiData<F>& w) {
    auto ox = h.x.order();
    if (!ox || *ox != w.n) return false;
    if (h.x.truncation() != kExact && h.x.truncation() < w.n + w.d)
        fail("truncation_exceeded", "arc known to too low an order for membership");
    std::size_t order = w.d + w.n + 4;
    // u = x / t^n, invertible reparameterization B = t * u^{1/n}, x = B^n
    std::vector<F> ucoef(h.x.coeffs().begin() + static_cast<long>(w.n), h.x.coeffs().end());
    Series<F> u(std::move(ucoef),
                h.x.truncation() == kExact ? kExact : h.x.truncation() - w.n);
    Series<F> root = unit_root(u, static_cast<int>(w.n), order);
    Series<F> B = (Series<F>::identity() * root).truncated(order);
    Series<F> Binv = reversion(B, order);
    Series<F> ynorm = compose(h.y, Binv).truncated(w.d);
    std::vector<F> bc = ynorm.coeffs();
    return twist_equivalent(w.psi.coeffs(), bc, w.n, w.d);
}

// A random arc of the space: y in psi + t^d * tail composed with a random
// invertible substitution.
template <ExactField F, class Rng>
Arc<F> sample_arc(const PuiData<F>& w, Rng& rng, std::size_t order) {
    std::vector<F> acoef(order, F(0));
    acoef[1] = F(1 + static_cast<int>(rng() % 3));
    for (std::size_t i = 2; i < std::min<std::size_t>(order, 5); ++i)
        acoef[i] = F(static_cast<int>(rng() % 5) - 2);
    Series<F> A(std::move(acoef), order);
    std::vector<F> ycoef = w.psi.coeffs();
    ycoef.resize(order, F(0));
    for (std::size_t i = w.d; i < std::min<std::size_t>(order, w.d + 3); ++i)
        ycoef[i] = F(static_cast<int>(rng() % 5) - 2);
    Series<F> y(std::move(ycoef), order);
    Series<F> xn = Series<F>::constant(F(1));
    for (std::size_t k = 0; k < w.n; ++k) xn = (xn * A).truncated(order);
    return {xn, compose(y, A).truncated(order)};
}

// The coordinate substitutions a blowup induces on arcs.
template <ExactField F>
Arc<F> push_arc_finite(const Arc<F>& h, const F& q) {
    return {h.x, (h.x * (h.y + Series<F>::constant(q))).truncated(
                     std::min(h.x.truncation(), h.y.truncation()))};
}
template <ExactField F>
Arc<F> push_arc_infinite(const Arc<F>& h) {
    return {(h.x * h.y).truncated(std::min(h.x.truncation(), h.y.truncation())), h.y};
}

} // namespace a1fib
