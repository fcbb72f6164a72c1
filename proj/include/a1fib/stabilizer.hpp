#pragma once

#include <array>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "a1fib/puiseux.hpp"
#include "a1fib/snf.hpp"

namespace a1fib {

// Sparse polynomials in the scaling unknown a (variable 0) and the root
// symbols alpha_k (variable k >= 1), with exact field coefficients.  The
// stabilizer systems are linear in the Q-coefficients over this ring.
template <ExactField F>
class SymPoly {
public:
    using Expo = std::vector<int>;

    SymPoly() = default;
    SymPoly(const F& v) {
        if (!v.is_zero()) terms_[{}] = v;
    }
    static SymPoly monomial(const F& c, Expo e) {
        SymPoly p;
        while (!e.empty() && e.back() == 0) e.pop_back();
        if (!c.is_zero()) p.terms_[std::move(e)] = c;
        return p;
    }
    static SymPoly a_power(const F& c, int i) {
        return monomial(c, i == 0 ? Expo{} : Expo{i});
    }
    static SymPoly alpha_power(const F& c, int var, int m) {
        Expo e(static_cast<std::size_t>(var) + 1, 0);
        e[static_cast<std::size_t>(var)] = m;
        return monomial(c, std::move(e));
    }

    const std::map<Expo, F>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    SymPoly operator-() const {
        SymPoly p = *this;
        for (auto& [e, c] : p.terms_) c = -c;
        return p;
    }
    friend SymPoly operator+(const SymPoly& x, const SymPoly& y) {
        SymPoly out = x;
        for (const auto& [e, c] : y.terms_) out.add(e, c);
        return out;
    }
    friend SymPoly operator-(const SymPoly& x, const SymPoly& y) { return x + (-y); }
    friend SymPoly operator*(const SymPoly& x, const SymPoly& y) {
        SymPoly out;
        for (const auto& [ea, ca] : x.terms_)
            for (const auto& [eb, cb] : y.terms_) {
                Expo e(std::max(ea.size(), eb.size()), 0);
                for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
                for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
                while (!e.empty() && e.back() == 0) e.pop_back();
                out.add(e, ca * cb);
            }
        return out;
    }
    SymPoly scaled(const F& v) const {
        SymPoly p;
        for (const auto& [e, c] : terms_) p.add(e, c * v);
        return p;
    }
    friend bool operator==(const SymPoly& x, const SymPoly& y) { return (x - y).is_zero(); }

    // value at a = alpha_k = 1
    F at_identity() const {
        F s(0);
        for (const auto& [e, c] : terms_) s += c;
        return s;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [e, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += to_string(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                out += i == 0 ? "*a" : "*al" + std::to_string(i);
                if (e[i] != 1) out += "^" + std::to_string(e[i]);
            }
        }
        return out;
    }

private:
    std::map<Expo, F> terms_;

    void add(Expo e, const F& c) {
        while (!e.empty() && e.back() == 0) e.pop_back();
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(std::move(e), c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
};

// One linear equation sum_j lhs[j] * b_j = rhs.
template <ExactField F>
struct QEquation {
    std::map<std::size_t, F> lhs;
    SymPoly<F> rhs;
};

// The raw constraint system a single Puiseux arc space imposes on
// (x,y) -> (a x, Q(x) y + P(x)): the P-coefficients c_i are determined
// expressions, and for n > 1 the Q-coefficients satisfy the twisted
// equations with alpha^n = a.
template <ExactField F>
struct ConstraintSystem {
    std::size_t N = 0;
    // c_i = a_part - sum_j q_part[j] b_j, for i < N
    struct PEquation {
        SymPoly<F> a_part;
        std::map<std::size_t, F> q_part;
    };
    std::vector<PEquation> p_equations;
    std::vector<QEquation<F>> q_equations;
    std::map<int, std::size_t> alpha_degrees; // variable index -> n with alpha^n = a
};

namespace detail {

// psi^reg as a polynomial in x (x stands for t^n)
template <ExactField F>
Series<F> reg_in_x(const Series<F>& psi, std::size_t n) {
    std::vector<F> reg;
    for (std::size_t i = 0; i < psi.coeffs().size(); ++i)
        if (i % n == 0) {
            reg.resize(i / n + 1, F(0));
            reg[i / n] = psi.coeffs()[i];
        }
    return Series<F>(std::move(reg), kExact);
}

template <ExactField F>
void add_sing_equations(std::vector<QEquation<F>>& out, const Series<F>& psi, std::size_t n,
                        std::size_t d, int alpha_var) {
    auto sing = split_reg_sing(psi, n).second;
    if (sing.is_zero()) return;
    for (std::size_t m = 0; m < d; ++m) {
        QEquation<F> eq;
        for (std::size_t j = 0; m >= n * j; ++j) {
            std::size_t l = m - n * j;
            F c = l < sing.coeffs().size() ? sing.coeffs()[l] : F(0);
            if (!c.is_zero()) eq.lhs[j] = c;
        }
        F rm = m < sing.coeffs().size() ? sing.coeffs()[m] : F(0);
        if (!rm.is_zero())
            eq.rhs = SymPoly<F>::alpha_power(rm, alpha_var, static_cast<int>(m));
        if (!eq.lhs.empty() || !eq.rhs.is_zero()) out.push_back(std::move(eq));
    }
}

} // namespace detail

// Constraint system of a single space in base form.
template <ExactField F>
ConstraintSystem<F> stab_single(const PuiseuxSpace<F>& w) {
    if (!w.base) fail("bad_input", "stabilizer equations need the base form");
    ConstraintSystem<F> sys;
    sys.N = (w.d() + w.n() - 1) / w.n();
    auto reg = detail::reg_in_x(w.psi(), w.n());
    for (std::size_t i = 0; i < sys.N; ++i) {
        typename ConstraintSystem<F>::PEquation pe;
        F ri = i < reg.coeffs().size() ? reg.coeffs()[i] : F(0);
        pe.a_part = SymPoly<F>::a_power(ri, static_cast<int>(i));
        for (std::size_t j = 0; j <= i; ++j) {
            F rl = (i - j) < reg.coeffs().size() ? reg.coeffs()[i - j] : F(0);
            if (!rl.is_zero()) pe.q_part[j] = rl;
        }
        sys.p_equations.push_back(std::move(pe));
    }
    if (w.n() > 1) {
        sys.alpha_degrees[1] = w.n();
        detail::add_sing_equations(sys.q_equations, w.psi(), w.n(), w.d(), 1);
    }
    return sys;
}

// Triangular assignment of one Q-coefficient.
template <ExactField F>
struct Assignment {
    enum class Status { free_coeff, determined };
    Status status = Status::free_coeff;
    SymPoly<F> expr; // for determined
};

template <ExactField F>
struct StabilizerDescription {
    std::size_t N = 0;
    Series<F> h;                               // conjugator, polynomial in x
    std::map<std::size_t, Assignment<F>> solved_Q;
    std::vector<SymPoly<F>> residuals;         // leftover relations (== 0)
    std::map<int, std::size_t> alpha_degrees;
    std::size_t q_window = 0;                  // b-indices below this were examined
};

// Intersection of the stabilizers of a finite collection of base-form
// spaces over one fiber: orders by d/n descending (stable), eliminates P via
// the first space, and solves the merged system degree by degree.
template <ExactField F>
StabilizerDescription<F> stab_intersect(std::vector<PuiseuxSpace<F>> ws) {
    if (ws.empty()) {
        StabilizerDescription<F> empty;
        empty.h = Series<F>::zero();
        return empty;
    }
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (!ws[i].base) fail("bad_input", "stab_intersect needs base-form spaces");
        if (ws[i].fiber && ws[0].fiber && !(*ws[i].fiber == *ws[0].fiber))
            fail("mixed_fibers", "spaces over different base points");
    }
    std::stable_sort(ws.begin(), ws.end(), [](const auto& x, const auto& y) {
        // d/n descending, exact comparison
        return BigInt(static_cast<long long>(x.d())) * BigInt(static_cast<long long>(y.n())) >
               BigInt(static_cast<long long>(y.d())) * BigInt(static_cast<long long>(x.n()));
    });

    StabilizerDescription<F> out;
    out.N = (ws[0].d() + ws[0].n() - 1) / ws[0].n();
    out.h = detail::reg_in_x(ws[0].psi(), ws[0].n());

    std::vector<QEquation<F>> eqs;
    auto reg1 = out.h;
    int next_alpha = 1;
    for (std::size_t k = 0; k < ws.size(); ++k) {
        const auto& w = ws[k];
        std::size_t nk = (w.d() + w.n() - 1) / w.n();
        if (k > 0) {
            // delta(ax) = delta(x) Q(x) mod x^{ceil(dk/nk)}, delta = reg_k - reg_1
            auto regk = detail::reg_in_x(w.psi(), w.n());
            Series<F> delta = regk - reg1;
            for (std::size_t i = 0; i < nk; ++i) {
                QEquation<F> eq;
                for (std::size_t j = 0; j <= i; ++j) {
                    F dl = (i - j) < delta.coeffs().size() ? delta.coeffs()[i - j] : F(0);
                    if (!dl.is_zero()) eq.lhs[j] = dl;
                }
                F di = i < delta.coeffs().size() ? delta.coeffs()[i] : F(0);
                if (!di.is_zero()) eq.rhs = SymPoly<F>::a_power(di, static_cast<int>(i));
                if (!eq.lhs.empty() || !eq.rhs.is_zero()) eqs.push_back(std::move(eq));
            }
        }
        if (w.n() > 1) {
            int var = next_alpha++;
            out.alpha_degrees[var] = w.n();
            detail::add_sing_equations(eqs, w.psi(), w.n(), w.d(), var);
        }
    }

    // triangular solve: substitute determined coefficients, then any equation
    // with a single unknown pins that coefficient down
    std::map<std::size_t, SymPoly<F>> det;
    std::set<std::size_t> touched;
    for (const auto& e : eqs)
        for (const auto& [j, c] : e.lhs) touched.insert(j);
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<QEquation<F>> keep;
        for (auto& eq : eqs) {
            SymPoly<F> rhs = eq.rhs;
            std::map<std::size_t, F> open;
            for (const auto& [j, c] : eq.lhs) {
                auto it = det.find(j);
                if (it == det.end()) open[j] = c;
                else rhs = rhs - it->second.scaled(c);
            }
            if (open.empty()) {
                if (!rhs.is_zero()) out.residuals.push_back(rhs);
                changed = true;
            } else if (open.size() == 1) {
                auto [j, c] = *open.begin();
                det[j] = rhs.scaled(inverse(c));
                changed = true;
            } else {
                QEquation<F> rest;
                rest.lhs = open;
                rest.rhs = rhs;
                keep.push_back(std::move(rest));
            }
        }
        eqs = std::move(keep);
    }
    if (!eqs.empty())
        fail("nonabelian_residual", "stabilizer system is not triangular");

    std::size_t window = 0;
    for (auto j : touched) window = std::max(window, j + 1);
    out.q_window = window;
    for (std::size_t j = 0; j < window; ++j) {
        Assignment<F> a;
        auto it = det.find(j);
        if (it != det.end()) {
            a.status = Assignment<F>::Status::determined;
            a.expr = it->second;
        }
        out.solved_Q[j] = a;
    }
    return out;
}

// Rank and torsion of the solution subgroup of the 2-torus, plus the
// b-relations of the a = 1 slice.
struct TorusPart {
    std::vector<std::array<BigInt, 2>> relations; // rows (u, v): a^u b^v = 1
    std::size_t rank = 2;
    BigInt torsion = 1;
    std::size_t slice_rank = 1;
    BigInt slice_order = 0; // 0 = the full multiplicative group
};

namespace detail {

// Extract the monomial relation rows on (a, b) from the solved description:
// restrict to constant Q = b, eliminate the alpha symbols by raising to the
// smallest power that turns them into powers of a.
template <ExactField F>
std::vector<std::array<BigInt, 2>> monomial_relations(const StabilizerDescription<F>& sys) {
    std::vector<std::array<BigInt, 2>> rows;
    auto alpha_degree = [&](int var) -> long long {
        auto it = sys.alpha_degrees.find(var);
        if (it == sys.alpha_degrees.end())
            fail("internal", "unknown root symbol in stabilizer system");
        return static_cast<long long>(it->second);
    };
    // relation: b^eb * (a,alpha)-monomial M1 = (a,alpha)-monomial M2 with
    // constant ratio 1; exponent vector r over (a, alpha...), then eliminate
    auto push_relation = [&](long long eb, std::map<int, long long> expo) {
        // expo: var -> exponent, var 0 = a
        long long lcm = 1;
        for (const auto& [var, e] : expo) {
            if (var == 0 || e == 0) continue;
            long long n = alpha_degree(var);
            long long g = std::gcd(n, e < 0 ? -e : e);
            lcm = std::lcm(lcm, n / g);
        }
        long long ua = 0;
        long long has_a = expo.count(0) ? expo[0] : 0;
        ua = has_a * lcm;
        for (const auto& [var, e] : expo) {
            if (var == 0 || e == 0) continue;
            long long n = alpha_degree(var);
            ua += (e * lcm) / n; // alpha^n = a
        }
        rows.push_back({BigInt(ua), BigInt(eb * lcm)});
    };

    auto relation_from_poly = [&](const SymPoly<F>& p, long long eb_on_lhs) {
        // eb_on_lhs * b = p  (or 0 = p when eb_on_lhs = 0)
        const auto& t = p.terms();
        if (t.empty()) {
            if (eb_on_lhs != 0) fail("internal", "Q-coefficient forced to zero");
            return;
        }
        auto expo_map = [](const typename SymPoly<F>::Expo& e) {
            std::map<int, long long> m;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) m[static_cast<int>(i)] = e[i];
            return m;
        };
        if (eb_on_lhs != 0) {
            if (t.size() != 1)
                fail("nonabelian_residual",
                     "Q-coefficient is not a monomial in the torus restriction: " + p.str());
            auto [e, c] = *t.begin();
            if (!c.is_one())
                fail("nonabelian_residual", "non-unit constant in torus relation: " + p.str());
            auto m = expo_map(e);
            for (auto& [v, x] : m) x = -x; // b = M  ->  b * M^{-1} = 1
            push_relation(eb_on_lhs, m);
            return;
        }
        // 0 = p: binomial difference of monomials
        if (t.size() == 1) fail("nonabelian_residual", "monomial forced to zero: " + p.str());
        if (t.size() != 2)
            fail("nonabelian_residual", "residual relation is not binomial: " + p.str());
        auto it = t.begin();
        auto [e1, c1] = *it;
        ++it;
        auto [e2, c2] = *it;
        if (!(c1 + c2).is_zero())
            fail("nonabelian_residual", "residual constant is not a root of unity: " + p.str());
        std::map<int, long long> m = expo_map(e1);
        for (const auto& [v, x] : expo_map(e2)) m[v] -= x;
        push_relation(0, m);
    };

    for (const auto& [j, a] : sys.solved_Q) {
        if (a.status != Assignment<F>::Status::determined) continue;
        if (j == 0) {
            relation_from_poly(a.expr, 1); // b = expr
        } else {
            // constant Q kills the higher coefficients
            if (!a.expr.is_zero()) relation_from_poly(a.expr, 0);
        }
    }
    for (const auto& r : sys.residuals) relation_from_poly(r, 0);
    return rows;
}

} // namespace detail

template <ExactField F>
TorusPart torus_part(const StabilizerDescription<F>& sys) {
    TorusPart t;
    t.relations = detail::monomial_relations(sys);
    std::vector<std::vector<BigInt>> m;
    for (const auto& r : t.relations) m.push_back({r[0], r[1]});
    auto s = smith_normal_form(m);
    t.rank = 2 - s.rank;
    t.torsion = 1;
    for (const auto& d : s.divisors) t.torsion *= d;
    // a = 1 slice: add the row (1, 0)
    auto m2 = m;
    m2.push_back({BigInt(1), BigInt(0)});
    auto s2 = smith_normal_form(m2);
    t.slice_rank = 2 - s2.rank;
    if (t.slice_rank == 0) {
        t.slice_order = 1;
        for (const auto& d : s2.divisors) t.slice_order *= d;
    } else {
        t.slice_order = 0; // one-dimensional: the full group
    }
    return t;
}

// Stabilizer description of a whole special fiber: the intersection over
// the outer blowup centers; inner centers are automatic.
template <ExactField F>
StabilizerDescription<F> fiber_stabilizer(const FiberModel<F>& model) {
    std::vector<PuiseuxSpace<F>> spaces;
    for (int comp : model.outer_blowups) {
        const auto& c = model.center_of(comp);
        PuiseuxSpace<F> w;
        w.base = false;
        w.comp = c.comp;
        w.at = c.at_infinity ? Coord<F>::infinity() : Coord<F>::finite(c.q);
        w.data = {Series<F>::zero(), 1, 1};
        while (!w.base) w = descend_step(model, w);
        w.fiber = model.base_point;
        spaces.push_back(std::move(w));
    }
    return stab_intersect(std::move(spaces));
}

// Group-structure report for a fibration over the affine line with special
// fibers at the given base points.
template <ExactField F>
struct AutReport {
    struct Fiber {
        F base_point;
        std::size_t N = 0;
        Series<F> h;
        TorusPart torus;
        bool rooted_chain = false;
    };
    std::vector<Fiber> fibers;
    std::vector<std::pair<F, std::size_t>> D0; // divisor sum N_j [beta_j]
    Series<F> u_mu_generator;                  // product (t - beta_j)^{N_j}
    Series<F> h_global;                        // interpolates the local conjugators
    std::size_t upsilon_rank = 1;
    BigInt upsilon_torsion = 1;
    bool parabolic = false;
    std::size_t finite_part_bound = 0; // acts through a subgroup of S(this)
};

namespace detail {

// p(beta + s) as a polynomial in s.
template <ExactField F>
Series<F> poly_shift(const Series<F>& p, const F& beta) {
    std::vector<F> out(p.coeffs().size(), F(0));
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
        if (p.coeffs()[i].is_zero()) continue;
        // coefficient of s^k in (beta + s)^i is C(i,k) beta^{i-k}
        F c(1);
        for (std::size_t k = 0; k <= i; ++k) {
            F bp(1);
            for (std::size_t l = 0; l < i - k; ++l) bp = bp * beta;
            out[k] += c * bp * p.coeffs()[i];
            c = c * F(static_cast<long long>(i - k)) * inverse(F(static_cast<long long>(k + 1)));
        }
    }
    return Series<F>(std::move(out), kExact);
}

// Chinese-remainder interpolation: h(beta_j + s) = h_j(s) mod s^{N_j}.
template <ExactField F>
Series<F> crt_interpolate(const std::vector<std::tuple<F, std::size_t, Series<F>>>& parts) {
    Series<F> h = Series<F>::zero();
    Series<F> modulus = Series<F>::constant(F(1));
    for (const auto& [beta, n, hloc] : parts) {
        if (n == 0) continue;
        Series<F> defect = poly_shift(h, beta) - hloc; // must become 0 mod s^n
        Series<F> mod_at = poly_shift(modulus, beta);
        auto om = mod_at.order();
        if (!om || *om != 0) fail("internal", "moduli are not coprime in interpolation");
        Series<F> inv = unit_inverse(mod_at, n);
        Series<F> corr = ((-defect) * inv).truncated(n);
        // back to t: corr(t - beta) * modulus added to h
        Series<F> corr_t = poly_shift(Series<F>(corr.coeffs(), kExact), -beta);
        h = h + corr_t * modulus;
        for (std::size_t k = 0; k < n; ++k) modulus = modulus * Series<F>({-beta, F(1)});
    }
    return h;
}

} // namespace detail

template <ExactField F>
AutReport<F> aut_report(const std::vector<FiberModel<F>>& models) {
    if (models.empty()) fail("bad_input", "need at least one fiber");
    for (std::size_t i = 0; i < models.size(); ++i)
        for (std::size_t j = i + 1; j < models.size(); ++j)
            if (models[i].base_point == models[j].base_point)
                fail("bad_input", "special fibers must sit over distinct base points");
    AutReport<F> rep;
    std::size_t total_components = 0;
    std::vector<std::tuple<F, std::size_t, Series<F>>> h_parts;
    BigInt upsilon_gcd = 0; // gcd of the slice orders, 0 meaning no constraint
    for (const auto& m : models) {
        auto sys = fiber_stabilizer(m);
        typename AutReport<F>::Fiber f;
        f.base_point = m.base_point;
        f.N = sys.N;
        f.h = sys.h;
        f.torus = torus_part(sys);
        f.rooted_chain = m.is_rooted_chain();
        if (f.N > 0) rep.D0.emplace_back(m.base_point, f.N);
        h_parts.emplace_back(m.base_point, f.N, f.h);
        total_components += m.components.size();
        if (f.torus.slice_order != 0)
            upsilon_gcd = boost::multiprecision::gcd(upsilon_gcd, f.torus.slice_order);
        rep.fibers.push_back(std::move(f));
    }
    // U_mu generator: product (t - beta_j)^{N_j}
    Series<F> gen = Series<F>::constant(F(1));
    for (const auto& [beta, n] : rep.D0)
        for (std::size_t k = 0; k < n; ++k) gen = gen * Series<F>({-beta, F(1)});
    rep.u_mu_generator = gen;
    rep.h_global = detail::crt_interpolate(h_parts);
    if (models.size() == 1) {
        // single special fiber: report the structure of the full torus part
        rep.upsilon_rank = rep.fibers[0].torus.rank;
        rep.upsilon_torsion = rep.fibers[0].torus.torsion;
    } else if (upsilon_gcd == 0) {
        rep.upsilon_rank = 1;
        rep.upsilon_torsion = 1;
    } else {
        rep.upsilon_rank = 0;
        rep.upsilon_torsion = upsilon_gcd;
    }
    rep.parabolic = std::all_of(rep.fibers.begin(), rep.fibers.end(),
                                [](const auto& f) { return f.rooted_chain; });
    rep.finite_part_bound = total_components;
    return rep;
}

} // namespace a1fib
