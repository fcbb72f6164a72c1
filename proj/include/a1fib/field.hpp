#pragma once

#include <concepts>
#include <string>

#include "a1fib/radical.hpp"
#include "a1fib/rational.hpp"

namespace a1fib {

// The exact-field interface the series, arc and stabilizer layers build on:
// ring operations, exact equality, inversion, and a k-th root that either
// stays in the field or reports the missing radical.
template <class F>
concept ExactField = requires(F a, F b) {
    { F(1) };
    { a + b } -> std::convertible_to<F>;
    { a - b } -> std::convertible_to<F>;
    { a * b } -> std::convertible_to<F>;
    { -a } -> std::convertible_to<F>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.is_one() } -> std::convertible_to<bool>;
    { inverse(a) } -> std::convertible_to<F>;
    { to_string(a) } -> std::convertible_to<std::string>;
};

struct FieldTraits {
    static Rational kth_root(const Rational& a, int k) {
        if (auto r = rational_kth_root(a, k)) return *r;
        throw ExtensionRequired(k, a.str());
    }
    static RadicalScalar kth_root(const RadicalScalar& a, int k) {
        return radical_kth_root(a, k);
    }
};

template <ExactField F>
F kth_root(const F& a, int k) {
    return FieldTraits::kth_root(a, k);
}

template <ExactField F>
F from_rational(const Rational& r) {
    return F(r);
}
template <>
inline Rational from_rational<Rational>(const Rational& r) { return r; }

// Scalar literals: "3/4", "-2", and for radical fields "rt(k,x)" with x
// itself a scalar literal.  Products/sums of radicals are not parsed; they
// only arise as computation results.
inline Rational parse_scalar_rational(const std::string& s) { return parse_rational(s); }

inline RadicalScalar parse_scalar_radical(const std::string& s) {
    auto strip = [](std::string t) {
        while (!t.empty() && t.front() == ' ') t.erase(t.begin());
        while (!t.empty() && t.back() == ' ') t.pop_back();
        return t;
    };
    std::string t = strip(s);
    if (t.rfind("rt(", 0) == 0 && t.back() == ')') {
        std::string inner = t.substr(3, t.size() - 4);
        int depth = 0;
        std::size_t comma = std::string::npos;
        for (std::size_t i = 0; i < inner.size(); ++i) {
            if (inner[i] == '(') ++depth;
            else if (inner[i] == ')') --depth;
            else if (inner[i] == ',' && depth == 0) { comma = i; break; }
        }
        if (comma == std::string::npos) fail("bad_scalar", "malformed radical '" + s + "'");
        int k = std::stoi(strip(inner.substr(0, comma)));
        RadicalScalar base = parse_scalar_radical(strip(inner.substr(comma + 1)));
        return radical_kth_root(base, k);
    }
    return RadicalScalar(parse_rational(t));
}

template <ExactField F>
F parse_scalar(const std::string& s);

template <>
inline Rational parse_scalar<Rational>(const std::string& s) { return parse_scalar_rational(s); }
template <>
inline RadicalScalar parse_scalar<RadicalScalar>(const std::string& s) {
    return parse_scalar_radical(s);
}

} // namespace a1fib
