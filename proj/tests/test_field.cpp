#include <catch2/catch_amalgamated.hpp>

#include "a1fib/field.hpp"

#include <random>

using namespace a1fib;

TEST_CASE("rational arithmetic and parsing") {
    Rational a = parse_rational("3/4");
    Rational b = parse_rational("-2/6");
    CHECK(a + b == parse_rational("5/12"));
    CHECK(a * b == parse_rational("-1/4"));
    CHECK(to_string(b) == "-1/3");
    CHECK(inverse(a) == parse_rational("4/3"));
    CHECK_THROWS_AS(inverse(Rational(0)), Error);
}

TEST_CASE("integer k-th roots") {
    CHECK(*integer_kth_root(BigInt(729), 3) == 9);
    CHECK(*integer_kth_root(BigInt(-8), 3) == -2);
    CHECK(!integer_kth_root(BigInt(2), 2));
    BigInt big = 1;
    for (int i = 0; i < 40; ++i) big *= 7;
    CHECK(*integer_kth_root(big, 5) == boost::multiprecision::pow(BigInt(7), 8));
}

TEST_CASE("rational k-th root stays exact or reports the extension") {
    CHECK(*rational_kth_root(parse_rational("4/9"), 2) == parse_rational("2/3"));
    CHECK(!rational_kth_root(Rational(2), 2));
    CHECK_THROWS_AS(kth_root(Rational(2), 2), ExtensionRequired);
    try {
        kth_root(Rational(2), 2);
    } catch (const ExtensionRequired& e) {
        CHECK(e.degree() == 2);
        CHECK(e.radicand() == "2");
    }
}

TEST_CASE("radical tower: adjunction and normal form") {
    RadicalScalar two(Rational(2));
    RadicalScalar r = kth_root(two, 2); // sqrt(2)
    CHECK(r * r == two);
    CHECK(!(r == two));
    RadicalScalar five(Rational(5));
    RadicalScalar s = kth_root(five, 3); // cbrt(5), extends the same tower
    CHECK(s * s * s == five);
    RadicalScalar mix = r * s + RadicalScalar(Rational(1));
    CHECK(mix - RadicalScalar(Rational(1)) == r * s);
    // in-field roots of perfect powers do not extend the tower
    RadicalScalar nine(Rational(9));
    CHECK(kth_root(nine, 2) == RadicalScalar(Rational(3)));
    CHECK(kth_root(r * r, 2).is_rational() == false); // sqrt of 2 again: the generator itself
    CHECK(kth_root(r * r, 2) == r);
}

TEST_CASE("radical tower: inversion via exact linear algebra") {
    RadicalScalar r = kth_root(RadicalScalar(Rational(2)), 2);
    RadicalScalar x = r + RadicalScalar(Rational(3)); // 3 + sqrt 2
    RadicalScalar xi = inverse(x);
    CHECK(x * xi == RadicalScalar(Rational(1)));
    // (a*b)*b^{-1} == a on random tower elements
    std::mt19937_64 rng(7);
    auto rnd = [&]() {
        RadicalScalar v(Rational(static_cast<int>(rng() % 7) - 3));
        RadicalScalar w(Rational(static_cast<int>(rng() % 5) - 2));
        return v + r * w;
    };
    for (int i = 0; i < 25; ++i) {
        RadicalScalar a = rnd();
        RadicalScalar b = rnd();
        if (b.is_zero()) continue;
        CHECK((a * b) / b == a);
    }
}

TEST_CASE("radical parser") {
    RadicalScalar v = parse_scalar<RadicalScalar>("rt(2,5)");
    CHECK(v * v == RadicalScalar(Rational(5)));
    RadicalScalar w = parse_scalar<RadicalScalar>("rt(3, 2/7)");
    CHECK(w * w * w == RadicalScalar(parse_rational("2/7")));
    CHECK(parse_scalar<RadicalScalar>("-5/3").rational_part() == parse_rational("-5/3"));
}
