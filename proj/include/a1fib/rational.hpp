#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <string>

#include "a1fib/error.hpp"

namespace a1fib {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Exact k-th root of a big integer, if it exists.
inline std::optional<BigInt> integer_kth_root(const BigInt& a, int k) {
    if (k <= 0) fail("bad_input", "root degree must be positive");
    if (a == 0) return BigInt(0);
    if (a < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = integer_kth_root(-a, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    if (a == 1 || k == 1) return a;
    // Newton iteration on integers, then verify exactly.
    BigInt x = 1;
    x <<= (boost::multiprecision::msb(a) / k + 1);
    while (true) {
        BigInt xk1 = 1;
        for (int i = 0; i < k - 1; ++i) xk1 *= x;
        BigInt next = ((k - 1) * x * xk1 + a) / (k * xk1);
        if (next >= x) break;
        x = next;
    }
    BigInt p = 1;
    for (int i = 0; i < k; ++i) p *= x;
    if (p == a) return x;
    return std::nullopt;
}

// Arbitrary-precision rational scalar. The exact-field operations used by
// the series and stabilizer layers are free functions so that radical-tower
// scalars can model the same concept.
class Rational {
public:
    Rational() = default;
    Rational(int v) : v_(v) {}
    Rational(long long v) : v_(v) {}
    Rational(BigInt v) : v_(std::move(v)) {}
    Rational(const BigInt& num, const BigInt& den) : v_(num, den) {
        if (den == 0) fail("bad_input", "zero denominator");
    }
    explicit Rational(BigRat v) : v_(std::move(v)) {}

    const BigRat& value() const noexcept { return v_; }
    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Rational operator-() const { return Rational(BigRat(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) fail("division_by_zero", "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const { return v_.str(); }

private:
    BigRat v_;
};

inline Rational inverse(const Rational& a) {
    if (a.is_zero()) fail("division_by_zero", "inverse of zero");
    return Rational(1) / a;
}

inline std::string to_string(const Rational& a) { return a.str(); }

// k-th root inside the rationals; nullopt when an extension would be needed.
inline std::optional<Rational> rational_kth_root(const Rational& a, int k) {
    auto n = integer_kth_root(a.numerator(), k);
    if (!n) return std::nullopt;
    auto d = integer_kth_root(a.denominator(), k);
    if (!d) return std::nullopt;
    return Rational(*n, *d);
}

// Parses "p/q" and integer literals; the radical syntax rt(k, x) is handled
// by the richer field parsers in field.hpp.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) fail("bad_scalar", "empty scalar literal");
    try {
        return Rational(BigRat(s));
    } catch (const std::exception&) {
        fail("bad_scalar", "cannot parse rational '" + s + "'");
    }
}

} // namespace a1fib
