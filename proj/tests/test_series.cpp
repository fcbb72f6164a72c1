#include <catch2/catch_amalgamated.hpp>

#include "a1fib/series.hpp"

#include <random>

using namespace a1fib;
using S = Series<Rational>;

namespace {

S rnd_series(std::mt19937_64& rng, std::size_t deg, bool unit = false, bool no_const = false) {
    std::vector<Rational> c(deg + 1);
    for (auto& v : c) v = Rational(static_cast<int>(rng() % 9) - 4);
    if (unit && c[0].is_zero()) c[0] = Rational(1);
    if (no_const) c[0] = Rational(0);
    return S(std::move(c));
}

// brute-force polynomial substitution oracle for compose()
S naive_compose(const S& f, const S& g, std::size_t cap) {
    S acc = S::zero();
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        S p = S::constant(Rational(1));
        for (std::size_t j = 0; j < i; ++j) p = (p * g).truncated(cap);
        acc = acc + p.scaled(f.coeffs()[i]);
    }
    return acc.truncated(cap);
}

} // namespace

TEST_CASE("series add/mul basics") {
    S one_plus_t({Rational(1), Rational(1)});
    S one_minus_t({Rational(1), Rational(-1)});
    S prod = (one_plus_t * one_minus_t).truncated(3);
    CHECK(prod == S({Rational(1), Rational(0), Rational(-1)}, 3));
}

TEST_CASE("compose with identity is identity") {
    S f({Rational(0), Rational(1), Rational(1)}); // t + t^2
    CHECK(compose(f, S::identity()) == f);
}

TEST_CASE("compose agrees with naive polynomial expansion") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 40; ++it) {
        S f = rnd_series(rng, 4);
        S g = rnd_series(rng, 4, false, true);
        S lhs = compose(f, g).truncated(9);
        S rhs = naive_compose(f, g, 9);
        CHECK(lhs.coeffs() == rhs.coeffs());
    }
}

TEST_CASE("composition rejects nonzero constant term") {
    CHECK_THROWS_WITH(compose(S::identity(), S::constant(Rational(1))),
                      Catch::Matchers::ContainsSubstring("bad_composition"));
}

TEST_CASE("truncation bookkeeping never claims unknown coefficients") {
    S a({Rational(1), Rational(2)}, 2);      // known mod t^2
    S b({Rational(0), Rational(3)}, kExact); // exact polynomial 3t
    S p = a * b;
    CHECK(p.truncation() == 3); // valuation shift extends the window
    CHECK(p.coeff(1) == Rational(3));
    CHECK(p.coeff(2) == Rational(6));
    CHECK_THROWS_AS(p.coeff(3), Error);
}

TEST_CASE("unit inverse") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 20; ++it) {
        S u = rnd_series(rng, 4, true);
        S v = unit_inverse(u, 8);
        CHECK((u * v).truncated(8) == S::constant(Rational(1)).truncated(8));
    }
}

TEST_CASE("unit_root basics") {
    CHECK(unit_root(S::constant(Rational(1)), 5, 6).coeffs() ==
          std::vector<Rational>{Rational(1)});
    S u({Rational(1), Rational(1)}); // 1 + t
    S v = unit_root(u, 2, 4);
    CHECK((v * v).truncated(4) == u.truncated(4));
    CHECK_THROWS_AS(unit_root(S::constant(Rational(2)), 2, 4), ExtensionRequired);
}

TEST_CASE("unit_root over a radical tower adjoins what it needs") {
    using SR = Series<RadicalScalar>;
    SR u({RadicalScalar(Rational(2)), RadicalScalar(Rational(1))});
    SR v = unit_root(u, 2, 5);
    SR sq = (v * v).truncated(5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(sq.coeff(i) == u.coeff(i));
}

TEST_CASE("reversion inverts composition") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 20; ++it) {
        S g = rnd_series(rng, 4, false, true);
        if (g.coeffs().size() < 2 || g.coeffs()[1].is_zero()) continue;
        S h = reversion(g, 8);
        S c = compose(g, h).truncated(8);
        CHECK(c == S::identity().truncated(8));
    }
}

TEST_CASE("solve_substitution: examples") {
    // psi = t, n = 1 -> t(s) = s, new exponent 2
    auto [t1, n1] = solve_substitution(S::identity(), 1, 8);
    CHECK(n1 == 2);
    CHECK(t1.coeff(1) == Rational(1));
    CHECK(t1.coeff(2) == Rational(0));

    // psi = t, n = 2 -> t(s) = s, new exponent 3
    auto [t2, n2] = solve_substitution(S::identity(), 2, 8);
    CHECK(n2 == 3);
    CHECK(t2.coeff(1) == Rational(1));

    // psi = t + t^2, n = 1: residual of t(s)^1 psi(t(s)) - s^2 vanishes to high order
    S psi({Rational(0), Rational(1), Rational(1)});
    auto [t3, n3] = solve_substitution(psi, 1, 8);
    CHECK(n3 == 2);
    S lhs = (t3 * compose(psi, t3)).truncated(7);
    CHECK(lhs == S::monomial(2, Rational(1)).truncated(7));
}

TEST_CASE("solve_substitution: random residuals vanish") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 20; ++it) {
        S psi = rnd_series(rng, 4, false, true);
        auto ord = psi.order();
        if (!ord) continue;
        // keep the leading coefficient 1 so no radical is needed over Q
        auto c = psi.coeffs();
        c[*ord] = Rational(1);
        psi = S(std::move(c));
        std::size_t n = 1 + rng() % 3;
        auto [ts, N] = solve_substitution(psi, n, 9);
        CHECK(N == n + *ord);
        S lhs = S::constant(Rational(1));
        for (std::size_t j = 0; j < n; ++j) lhs = lhs * ts;
        lhs = (lhs * compose(psi, ts)).truncated(8);
        CHECK(lhs == S::monomial(N, Rational(1)).truncated(8));
    }
}

TEST_CASE("solve_substitution adjoins roots over the radical field") {
    using SR = Series<RadicalScalar>;
    // psi = 2t: t(s)^1 * 2 t(s) = s^2 forces t = s / sqrt(2)
    SR psi({RadicalScalar(Rational(0)), RadicalScalar(Rational(2))});
    auto [ts, N] = solve_substitution(psi, 1, 6);
    CHECK(N == 2);
    SR lhs = (ts * compose(psi, ts)).truncated(5);
    CHECK(lhs.coeff(2) == RadicalScalar(Rational(1)));
    CHECK(lhs.coeff(3).is_zero());
    CHECK(lhs.coeff(4).is_zero());
}

TEST_CASE("ring axioms on random truncated series") {
    std::mt19937_64 rng(23);
    for (int it = 0; it < 15; ++it) {
        S a = rnd_series(rng, 3), b = rnd_series(rng, 3), c = rnd_series(rng, 3);
        CHECK(((a * b) * c).truncated(6) == (a * (b * c)).truncated(6));
        CHECK((a * (b + c)).truncated(6) == (a * b + a * c).truncated(6));
    }
}
