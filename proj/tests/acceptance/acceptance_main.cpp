// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.  All checks are exact; the time limits
// are part of the criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "a1fib/cli.hpp"
#include "support/descent_oracle.hpp"
#include "support/random_tower.hpp"

using namespace a1fib;
using F = Rational;
using FR = RadicalScalar;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget_seconds > 0 && secs > budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("time budget exceeded");
    }
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", number,
                title.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

template <class T>
Series<T> poly(std::initializer_list<int> c) {
    std::vector<T> v;
    for (int x : c) v.push_back(T(x));
    return Series<T>(std::move(v), kExact);
}

BlowupSpec<F> spec_222_1() {
    BlowupSpec<F> s;
    s.blowups.push_back({0, Coord<F>::finite(F(0))});
    s.blowups.push_back({1, Coord<F>::infinity()});
    s.blowups.push_back({2, Coord<F>::finite(F(1))});
    return s;
}

template <ExactField T>
PuiseuxSpace<T> pui_of_center(const FiberModel<T>& m, int created_comp) {
    const auto& c = m.center_of(created_comp);
    PuiseuxSpace<T> w;
    w.base = false;
    w.comp = c.comp;
    w.at = c.at_infinity ? Coord<T>::infinity() : Coord<T>::finite(c.q);
    w.data = {Series<T>::zero(), 1, 1};
    while (!w.base) w = descend_step(m, w);
    return w;
}

// ---- criterion bodies -------------------------------------------------------

bool golden_example(std::string& detail) {
    auto m = FiberModel<F>::build(spec_222_1());
    // multiplicities (1,1,2,2)
    std::vector<BigInt> mults;
    for (const auto& c : m.components) mults.push_back(c.multiplicity);
    if (mults != std::vector<BigInt>{1, 1, 2, 2}) { detail = "multiplicities"; return false; }
    // Pui of the third center is Pui(t,2,2)
    auto w = pui_of_center(m, 3);
    if (!(w.psi() == poly<F>({0, 1})) || w.n() != 2 || w.d() != 2 || !(w.base_center() == F(0))) {
        detail = "Pui(t,2,2)";
        return false;
    }
    // single-space constraints are exactly c0 = 0 and b0 = alpha, alpha^2 = a
    auto sys = stab_single(w);
    bool c0_zero = sys.N == 1 && sys.p_equations.size() == 1 &&
                   sys.p_equations[0].a_part.is_zero() && sys.p_equations[0].q_part.empty();
    bool b0_alpha = sys.q_equations.size() == 1 && sys.q_equations[0].lhs.size() == 1 &&
                    sys.q_equations[0].lhs.count(0) && sys.q_equations[0].lhs.at(0) == F(1) &&
                    sys.q_equations[0].rhs == SymPoly<F>::alpha_power(F(1), 1, 1) &&
                    sys.alpha_degrees.size() == 1 && sys.alpha_degrees.at(1) == 2;
    if (!c0_zero || !b0_alpha) { detail = "constraint system"; return false; }
    // fiber stabilizer: N = 1, h = 0, torus rank 1 with b^2 = a, slice order 2
    auto desc = fiber_stabilizer(m);
    auto t = torus_part(desc);
    if (desc.N != 1 || !desc.h.is_zero()) { detail = "N/h"; return false; }
    if (t.relations != std::vector<std::array<BigInt, 2>>{{BigInt(-1), BigInt(2)}} ||
        t.rank != 1 || t.slice_order != 2) {
        detail = "torus";
        return false;
    }
    // extended divisor: spine [0,-1,-2,-2,-2] with a -1 feather on C3
    Zigzag boundary;
    for (int v : {0, -1, -2, -2, -2}) boundary.w.push_back(BigInt(v));
    auto ext = extended_divisor(m, boundary);
    std::vector<BigInt> spine;
    for (int id : ext.spine) spine.push_back(ext.tree.vertex(id).weight);
    if (spine != std::vector<BigInt>{0, -1, -2, -2, -2} || ext.feathers.size() != 1 ||
        ext.feathers[0].anchor != 3 || ext.feathers[0].chain.size() != 1 ||
        ext.tree.vertex(ext.feathers[0].chain[0]).weight != -1) {
        detail = "extended divisor";
        return false;
    }
    // the CLI pipeline is deterministic byte for byte
    cli::Options opt;
    opt.command = "aut-report";
    opt.input = std::string(A1FIB_DATA_DIR) + "/ex-222-1.json";
    auto r1 = cli::run(opt), r2 = cli::run(opt);
    if (r1.exit_code != 0 || r1.out != r2.out) { detail = "cli determinism"; return false; }
    auto j = Json::parse(r1.out)["report"];
    if (j["fibers"][0]["N"] != 1 || j["fibers"][0]["torus"]["slice_order"] != 2) {
        detail = "cli report";
        return false;
    }
    return true;
}

bool zigzag_standard_forms(std::string& detail) {
    for (int d = 2; d <= 8; ++d) {
        Zigzag z;
        z.w.push_back(BigInt(d));
        auto res = standardize(z);
        std::vector<BigInt> want{0, 0};
        for (int i = 0; i < d - 1; ++i) want.push_back(BigInt(-2));
        if (res.standard.w != want) { detail = "[[d]] family"; return false; }
        if (!(replay(z, res.log) == res.standard)) { detail = "log replay"; return false; }
    }
    std::mt19937_64 rng(20260810);
    for (int it = 0; it < 1000; ++it) {
        std::size_t n = 1 + rng() % 8;
        Zigzag z;
        for (std::size_t i = 0; i < n; ++i) z.w.push_back(BigInt(static_cast<int>(rng() % 13) - 6));
        auto res = standardize(z);
        if (!(standardize(res.standard).standard == res.standard)) {
            detail = "idempotence at " + z.str();
            return false;
        }
        if (!(replay(z, res.log) == res.standard)) { detail = "replay"; return false; }
        if (res.standard.is_standard() && !(revert(revert(res.standard)) == res.standard)) {
            detail = "revert involution";
            return false;
        }
    }
    return true;
}

bool fiber_consistency(std::string& detail) {
    std::mt19937_64 rng(33550336);
    for (int it = 0; it < 500; ++it) {
        auto spec = testsupport::random_spec<F>(rng, 1 + rng() % 5);
        auto m = FiberModel<F>::build(spec);
        if (m.self_intersection() != 0) { detail = "self-intersection"; return false; }
        try {
            m.contraction_order();
        } catch (const std::exception& e) {
            detail = std::string("contraction failed: ") + e.what();
            return false;
        }
    }
    return true;
}

bool descent_vs_oracle(std::string& detail) {
    std::mt19937_64 rng(6283185);
    int towers = 0;
    while (towers < 200) {
        auto spec = testsupport::random_spec<FR>(rng, 1 + rng() % 4);
        auto m = FiberModel<FR>::build(spec);
        ++towers;
        for (const auto& comp : m.components) {
            if (comp.kind != ComponentKind::outer) continue;
            // implementation result
            auto w = pui_of_center(m, comp.id);
            // independent symbolic oracle
            const auto& c = m.center_of(comp.id);
            auto o = testsupport::pui_oracle(
                m, c.comp, c.at_infinity ? Coord<FR>::infinity() : Coord<FR>::finite(c.q),
                w.d() + w.n() + 8);
            PuiData<FR> od{o.psi, o.n, o.d};
            if (w.n() != o.n || w.d() != o.d || !same_space(w.data, od)) {
                detail = "oracle mismatch on tower " + std::to_string(towers);
                return false;
            }
            // sample-arc membership through each descent step
            PuiseuxSpace<FR> cur;
            cur.base = false;
            cur.comp = c.comp;
            cur.at = c.at_infinity ? Coord<FR>::infinity() : Coord<FR>::finite(c.q);
            cur.data = {Series<FR>::zero(), 1, 1};
            while (!cur.base) {
                auto next = descend_step(m, cur);
                auto h = sample_arc(cur.data, rng, cur.data.d + cur.data.n + 10);
                Arc<FR> pushed;
                if (next.base) {
                    // the last step translates the chart to the root
                    // component coordinate; x is untouched
                    pushed = {h.x, h.y + Series<FR>::constant(cur.at.q)};
                } else {
                    pushed = cur.at.inf ? push_arc_infinite(h)
                                        : push_arc_finite(h, cur.at.q);
                }
                if (!arc_in_space(pushed, next.data)) {
                    detail = "membership lost through a descent step";
                    return false;
                }
                cur = next;
            }
        }
    }
    return true;
}

bool multiplicities(std::string& detail) {
    std::mt19937_64 rng(1729);
    // smooth points on random towers
    for (int it = 0; it < 120; ++it) {
        auto spec = testsupport::random_spec<FR>(rng, 1 + rng() % 4);
        auto m = FiberModel<FR>::build(spec);
        for (const auto& comp : m.components) {
            // find a free pool coordinate on this component
            std::optional<Coord<FR>> at;
            for (const auto& q : testsupport::coordinate_pool()) {
                auto cand = Coord<FR>::finite(FR(q));
                if (!m.node_at(comp.id, cand)) { at = cand; break; }
            }
            if (!at) continue;
            auto w = pui_of_point(m, comp.id, *at);
            if (BigInt(static_cast<long long>(w.n())) != comp.multiplicity) {
                detail = "smooth-point multiplicity";
                return false;
            }
        }
    }
    // node formula against the push-to-base oracle
    int arcs = 0;
    while (arcs < 100) {
        auto spec = testsupport::random_spec<F>(rng, 1 + rng() % 4);
        auto m = FiberModel<F>::build(spec);
        std::vector<int> alive;
        for (std::size_t i = 0; i < m.nodes.size(); ++i)
            if (m.nodes[i].alive) alive.push_back(static_cast<int>(i));
        if (alive.empty()) continue;
        int node = alive[rng() % alive.size()];
        std::size_t i = 1 + rng() % 3, j = 1 + rng() % 3;
        Arc<F> h{Series<F>::monomial(i, F(1)) +
                     Series<F>::monomial(i + 1, F(static_cast<int>(rng() % 3))),
                 Series<F>::monomial(j, F(1)) +
                     Series<F>::monomial(j + 2, F(static_cast<int>(rng() % 3)))};
        auto predicted = arc_multiplicity_at_node(m, node, h);
        const auto& nd = m.nodes[static_cast<std::size_t>(node)];
        auto pushed = testsupport::push_arc_to_base(
            m, nd.rep_comp, nd.rep_inf ? Coord<F>::infinity() : Coord<F>::finite(F(0)), h);
        auto ord = pushed.x.order();
        if (!ord || predicted != BigInt(static_cast<long long>(*ord))) {
            detail = "node formula";
            return false;
        }
        ++arcs;
    }
    return true;
}

bool linear_chain_cross_check(std::string& detail) {
    std::mt19937_64 rng(28);
    for (int it = 0; it < 300; ++it) {
        auto spec = testsupport::random_spec<FR>(rng, 1 + rng() % 5);
        auto m = FiberModel<FR>::build(spec);
        auto t = torus_part(fiber_stabilizer(m));
        bool full_slice = t.slice_order == 0;
        if (m.is_rooted_chain() != full_slice) {
            detail = "divergence at tower " + std::to_string(it);
            return false;
        }
    }
    return true;
}

bool torus_snf_brute_force(std::string& detail) {
    std::mt19937_64 rng(496);
    for (int it = 0; it < 50; ++it) {
        std::vector<std::array<BigInt, 2>> rows;
        std::size_t k = 1 + rng() % 2;
        for (std::size_t i = 0; i < k; ++i)
            rows.push_back({BigInt(static_cast<int>(rng() % 13) - 6),
                            BigInt(static_cast<int>(rng() % 13) - 6)});
        // predicted via the Smith form
        std::vector<std::vector<BigInt>> mtx;
        for (const auto& r : rows) mtx.push_back({r[0], r[1]});
        auto s = smith_normal_form(mtx);
        BigInt predicted = 1;
        for (const auto& d : s.divisors) predicted *= boost::multiprecision::gcd(d, BigInt(60));
        for (std::size_t c = 0; c < 2 - s.rank; ++c) predicted *= 60;
        // enumerated
        long long count = 0;
        for (int i = 0; i < 60; ++i)
            for (int j = 0; j < 60; ++j) {
                bool ok = true;
                for (const auto& r : rows) {
                    long long u = r[0].convert_to<long long>();
                    long long v = r[1].convert_to<long long>();
                    if (((u * i + v * j) % 60 + 60) % 60 != 0) { ok = false; break; }
                }
                if (ok) ++count;
            }
        if (predicted != count) { detail = "SNF vs enumeration"; return false; }
    }
    return true;
}

bool multi_fiber_reports(std::string& detail) {
    BlowupSpec<F> f1, f2;
    f1.base_point = F(0);
    f1.blowups.push_back({0, Coord<F>::finite(F(0))});
    f2.base_point = F(1);
    f2.blowups.push_back({0, Coord<F>::finite(F(0))});
    auto rep = aut_report<F>({FiberModel<F>::build(f1), FiberModel<F>::build(f2)});
    bool d0_ok = rep.D0.size() == 2 && rep.D0[0].second == 1 && rep.D0[1].second == 1 &&
                 rep.D0[0].first == F(0) && rep.D0[1].first == F(1);
    if (!d0_ok) { detail = "D0"; return false; }
    if (!(rep.u_mu_generator == poly<F>({0, -1, 1}))) { detail = "generator t(t-1)"; return false; }
    if (rep.upsilon_rank != 1 || rep.upsilon_torsion != 1 || !rep.parabolic) {
        detail = "Upsilon should be the full multiplicative group";
        return false;
    }
    auto s1 = spec_222_1();
    auto rep2 = aut_report<F>({FiberModel<F>::build(s1), FiberModel<F>::build(f2)});
    if (rep2.upsilon_rank != 0 || rep2.upsilon_torsion != 2 || rep2.parabolic) {
        detail = "Upsilon should be Z/2";
        return false;
    }
    return true;
}

bool dpd_classification(std::string& detail) {
    using Dpd = DpdPresentation<F>;
    using Div = QDivisor<F>;
    auto pt = [](int v) { return CurvePoint<F>{false, F(v)}; };
    auto frac = [](int n, int d) { return Rational(BigInt(n), BigInt(d)); };
    auto mk = [&](std::initializer_list<std::pair<int, Rational>> e) {
        Div d;
        for (const auto& [p, c] : e) d.add(pt(p), c);
        return d;
    };
    // one instance per row of the case table
    struct Row {
        Dpd p;
        MLClass want;
    };
    std::vector<Row> rows = {
        {{DpdKind::elliptic, mk({{0, frac(1, 2)}, {1, frac(1, 3)}}), {}}, MLClass::ML0},
        {{DpdKind::parabolic, mk({{0, frac(1, 2)}}), {}}, MLClass::ML0},
        {{DpdKind::hyperbolic, mk({{0, frac(-1, 2)}}), mk({{1, frac(-1, 3)}})}, MLClass::ML0},
        {{DpdKind::parabolic, mk({{0, frac(1, 2)}, {1, frac(1, 3)}}), {}}, MLClass::ML1},
        {{DpdKind::hyperbolic, mk({{0, frac(-1, 2)}, {1, frac(-1, 3)}}), mk({{2, frac(-1, 2)}})},
         MLClass::ML1},
        {{DpdKind::hyperbolic, mk({{2, frac(-1, 2)}}), mk({{0, frac(-1, 2)}, {1, frac(-1, 3)}})},
         MLClass::ML1},
        {{DpdKind::elliptic, mk({{0, frac(1, 2)}, {1, frac(1, 3)}, {2, frac(1, 5)}}), {}},
         MLClass::ML2},
        {{DpdKind::hyperbolic, mk({{0, frac(-1, 2)}, {1, frac(-1, 3)}}),
          mk({{2, frac(-1, 2)}, {3, frac(-1, 5)}})},
         MLClass::ML2},
        {{DpdKind::parabolic, mk({{0, Rational(1)}}), {}}, MLClass::ML0},
    };
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (classify_ml(rows[i].p) != rows[i].want) {
            detail = "case table row " + std::to_string(i);
            return false;
        }
    // invariance on random presentations
    std::mt19937_64 rng(8128);
    for (int it = 0; it < 200; ++it) {
        Div dp, dm;
        auto rnd_div = [&](int offset) {
            Div d;
            std::size_t k = rng() % 3;
            for (std::size_t i = 0; i < k; ++i) {
                int den = 1 + static_cast<int>(rng() % 4);
                int num = -(1 + static_cast<int>(rng() % (2 * den)));
                d.add(pt(offset + static_cast<int>(i)), Rational(BigInt(num), BigInt(den)));
            }
            return d;
        };
        dp = rnd_div(0);
        dm = rnd_div(10);
        Dpd p{DpdKind::hyperbolic, dp, dm};
        auto base = classify_ml(p);
        Dpd swapped{DpdKind::hyperbolic, dm, dp};
        Div gauge;
        gauge.add(pt(static_cast<int>(rng() % 12)), Rational(-1 - static_cast<int>(rng() % 2)));
        Dpd gauged{DpdKind::hyperbolic, dp + gauge, dm + (-gauge)};
        if (classify_ml(swapped) != base || classify_ml(gauged) != base) {
            detail = "invariance";
            return false;
        }
        if (is_toric(p) != is_toric(gauged)) { detail = "toric gauge invariance"; return false; }
    }
    return true;
}

// SL(2,Z) realizes the amalgam of Z/4 and Z/6 over Z/2: a faithful oracle.
using Mat = std::array<long long, 4>;
Mat mat_mul(const Mat& a, const Mat& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

bool amalgam_acceptance(std::string& detail) {
    TreeOfGroups t;
    t.groups.push_back(FiniteGroup::cyclic(4, "s"));
    t.groups.push_back(FiniteGroup::cyclic(6, "u"));
    TreeOfGroups::Edge e;
    e.u = 0;
    e.v = 1;
    e.image_u = {0, 2};
    e.image_v = {0, 3};
    e.reps_u = {0, 1};
    e.reps_v = {0, 1, 2};
    t.edges.push_back(e);
    t.validate();

    const Mat S{0, -1, 1, 0}, U{0, -1, 1, 1};
    auto mat_of = [&](const Word& w) {
        Mat m{1, 0, 0, 1};
        for (const auto& l : w) {
            Mat g{1, 0, 0, 1};
            const Mat& base = l.vertex == 0 ? S : U;
            for (int k = 0; k < l.element; ++k) g = mat_mul(g, base);
            m = mat_mul(m, g);
        }
        return m;
    };

    // every word of length <= 5: the normal form must separate words exactly
    // as the faithful matrix model does
    std::map<Mat, Word> seen;
    std::vector<Word> level{Word{}};
    std::vector<Letter> alphabet;
    for (int x = 0; x < 4; ++x) alphabet.push_back({0, x});
    for (int x = 0; x < 6; ++x) alphabet.push_back({1, x});
    long checked = 0;
    for (int len = 0; len <= 5; ++len) {
        std::vector<Word> next;
        for (const auto& w : level) {
            auto nf = normal_form(t, w);
            auto m = mat_of(w);
            if (!(mat_of(nf) == m)) { detail = "nf changed the element"; return false; }
            auto it = seen.find(m);
            if (it == seen.end()) seen.emplace(m, nf);
            else if (!(it->second == nf)) {
                detail = "equal elements with different normal forms";
                return false;
            }
            ++checked;
            if (len < 5)
                for (const auto& l : alphabet) {
                    auto w2 = w;
                    w2.push_back(l);
                    next.push_back(std::move(w2));
                }
        }
        level = std::move(next);
    }
    if (checked < 100000) { detail = "word enumeration too small"; return false; }

    // planted conjugators
    std::mt19937_64 rng(137);
    int recovered = 0;
    for (int it = 0; recovered < 50 && it < 200; ++it) {
        Word g;
        std::size_t glen = rng() % 3;
        for (std::size_t i = 0; i < glen; ++i) {
            int v = static_cast<int>(rng() % 2);
            g.push_back({v, 1 + static_cast<int>(rng() % (v == 0 ? 3 : 5))});
        }
        g = normal_form(t, g);
        int vtx = static_cast<int>(rng() % 2);
        std::vector<Word> gens;
        for (int el = 1; el < (vtx == 0 ? 4 : 6); ++el) {
            if (rng() % 2) continue;
            Word w = g;
            w.push_back({vtx, el});
            auto gi = word_inverse(t, g);
            w.insert(w.end(), gi.begin(), gi.end());
            gens.push_back(normal_form(t, w));
        }
        if (gens.empty()) continue;
        std::size_t bound = 1;
        for (const auto& h : gens) bound = std::max(bound, h.size());
        auto fv = bounded_fixed_vertex(t, gens, bound, bound + 2);
        if (!fv) { detail = "no fixed vertex found"; return false; }
        for (const auto& h : gens) {
            Word test = word_inverse(t, fv->conjugator);
            test.insert(test.end(), h.begin(), h.end());
            test.insert(test.end(), fv->conjugator.begin(), fv->conjugator.end());
            if (normal_form(t, test).size() > 1) {
                detail = "conjugator does not normalize the subgroup";
                return false;
            }
        }
        ++recovered;
    }
    if (recovered < 50) { detail = "not enough recoveries"; return false; }
    return true;
}

} // namespace

int main() {
    criterion(1, "golden three-blowup example, end to end", 1.0, golden_example);
    criterion(2, "zigzag standard forms and involutions", 10.0, zigzag_standard_forms);
    criterion(3, "fiber consistency on 500 random towers", 30.0, fiber_consistency);
    criterion(4, "descent against the coordinate-substitution oracle", 60.0, descent_vs_oracle);
    criterion(5, "multiplicity formulas", 0.0, multiplicities);
    criterion(6, "rooted chain iff full torus slice", 0.0, linear_chain_cross_check);
    criterion(7, "torus Smith form against root-of-unity enumeration", 0.0,
              torus_snf_brute_force);
    criterion(8, "multi-fiber reports", 0.0, multi_fiber_reports);
    criterion(9, "DPD classification table and invariances", 0.0, dpd_classification);
    criterion(10, "amalgam normal forms and planted conjugators", 30.0, amalgam_acceptance);
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
