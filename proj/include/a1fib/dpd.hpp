#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "a1fib/field.hpp"
#include "a1fib/zigzag.hpp"

namespace a1fib {

// A point of the base curve: a scalar on the affine line, or the marked
// point at infinity of the projective line (elliptic presentations only).
template <ExactField F>
struct CurvePoint {
    bool at_infinity = false;
    F value = F(0);

    friend bool operator==(const CurvePoint& a, const CurvePoint& b) {
        return a.at_infinity == b.at_infinity && (a.at_infinity || a.value == b.value);
    }
    friend bool operator<(const CurvePoint& a, const CurvePoint& b) {
        if (a.at_infinity != b.at_infinity) return b.at_infinity;
        if (a.at_infinity) return false;
        return to_string(a.value) < to_string(b.value);
    }
    std::string str() const { return at_infinity ? "inf" : to_string(value); }
};

// Rational divisor on the base curve; zero coefficients are dropped.
template <ExactField F>
class QDivisor {
public:
    QDivisor() = default;
    explicit QDivisor(std::vector<std::pair<CurvePoint<F>, Rational>> support) {
        for (auto& [p, c] : support) add(p, c);
    }

    void add(const CurvePoint<F>& p, const Rational& c) {
        if (c.is_zero()) return;
        for (auto& [q, x] : support_)
            if (q == p) {
                x += c;
                if (x.is_zero())
                    support_.erase(std::remove_if(support_.begin(), support_.end(),
                                                  [&](const auto& e) { return e.second.is_zero(); }),
                                   support_.end());
                return;
            }
        support_.emplace_back(p, c);
        std::sort(support_.begin(), support_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    const std::vector<std::pair<CurvePoint<F>, Rational>>& support() const { return support_; }
    bool empty() const { return support_.empty(); }

    Rational degree() const {
        Rational s(0);
        for (const auto& [p, c] : support_) s += c;
        return s;
    }

    // coefficientwise c - floor(c)
    QDivisor fractional() const {
        QDivisor out;
        for (const auto& [p, c] : support_) {
            BigInt fl = c.numerator() / c.denominator();
            if (c < Rational(0) && fl * c.denominator() != c.numerator()) fl -= 1;
            out.add(p, c - Rational(fl));
        }
        return out;
    }

    QDivisor operator+(const QDivisor& o) const {
        QDivisor out = *this;
        for (const auto& [p, c] : o.support_) out.add(p, c);
        return out;
    }
    QDivisor operator-() const {
        QDivisor out;
        for (const auto& [p, c] : support_) out.add(p, -c);
        return out;
    }

    bool is_integral() const {
        return std::all_of(support_.begin(), support_.end(), [](const auto& e) {
            return e.second.denominator() == 1;
        });
    }

    std::set<CurvePoint<F>> support_points() const {
        std::set<CurvePoint<F>> s;
        for (const auto& [p, c] : support_) s.insert(p);
        return s;
    }

    friend bool operator==(const QDivisor& a, const QDivisor& b) {
        return a.support_ == b.support_;
    }

private:
    std::vector<std::pair<CurvePoint<F>, Rational>> support_;
};

enum class DpdKind { elliptic, parabolic, hyperbolic };

inline const char* dpd_kind_name(DpdKind k) {
    switch (k) {
        case DpdKind::elliptic: return "elliptic";
        case DpdKind::parabolic: return "parabolic";
        case DpdKind::hyperbolic: return "hyperbolic";
    }
    return "elliptic";
}

// Presentation of a normal affine surface with a multiplicative group
// action: elliptic (projective base, ample divisor), parabolic (affine
// base), or hyperbolic (affine base, a pair with D+ + D- <= 0).
template <ExactField F>
struct DpdPresentation {
    DpdKind kind = DpdKind::parabolic;
    QDivisor<F> d_plus;  // the divisor D for elliptic/parabolic
    QDivisor<F> d_minus; // hyperbolic only

    void validate() const {
        if (kind == DpdKind::hyperbolic) {
            auto sum = d_plus + d_minus;
            for (const auto& [p, c] : sum.support())
                if (c > Rational(0))
                    fail("bad_input", "hyperbolic presentation needs D+ + D- <= 0");
            for (const auto& [p, c] : d_plus.support())
                if (p.at_infinity) fail("bad_input", "hyperbolic base is the affine line");
            for (const auto& [p, c] : d_minus.support())
                if (p.at_infinity) fail("bad_input", "hyperbolic base is the affine line");
        }
        if (kind == DpdKind::parabolic)
            for (const auto& [p, c] : d_plus.support())
                if (p.at_infinity) fail("bad_input", "parabolic base is the affine line");
        if (kind == DpdKind::elliptic && !(Rational(0) < d_plus.degree()))
            fail("bad_input", "elliptic presentation needs positive degree");
    }
};

// The classification table by the supports of the fractional parts.
template <ExactField F>
MLClass classify_ml(const DpdPresentation<F>& p) {
    p.validate();
    switch (p.kind) {
        case DpdKind::elliptic:
            return p.d_plus.fractional().support_points().size() <= 2 ? MLClass::ML0
                                                                      : MLClass::ML2;
        case DpdKind::parabolic:
            return p.d_plus.fractional().support_points().size() <= 1 ? MLClass::ML0
                                                                      : MLClass::ML1;
        case DpdKind::hyperbolic: {
            bool plus_small = p.d_plus.fractional().support_points().size() <= 1;
            bool minus_small = p.d_minus.fractional().support_points().size() <= 1;
            if (plus_small && minus_small) return MLClass::ML0;
            if (plus_small || minus_small) return MLClass::ML1;
            return MLClass::ML2;
        }
    }
    return MLClass::ML2;
}

// Toric recognition for hyperbolic presentations: both fractional parts live
// at one common point (or vanish) and the sum D+ + D- is integral.
template <ExactField F>
bool is_toric(const DpdPresentation<F>& p) {
    if (p.kind != DpdKind::hyperbolic)
        fail("wrong_kind", "toric recognition applies to hyperbolic presentations");
    p.validate();
    auto sp = p.d_plus.fractional().support_points();
    auto sm = p.d_minus.fractional().support_points();
    std::set<CurvePoint<F>> all = sp;
    all.insert(sm.begin(), sm.end());
    if (all.size() > 1) return false;
    return (p.d_plus + p.d_minus).is_integral();
}

// (A^1, -(1/r)[p0], -(1/(d-r))[p1])
template <ExactField F>
DpdPresentation<F> danilov_gizatullin(long long d, long long r, F p0 = F(0), F p1 = F(1)) {
    if (d < 2 || r < 1 || r > d - 1) fail("bad_params", "need d >= 2 and 1 <= r <= d-1");
    if (p0 == p1) fail("bad_params", "the two support points must differ");
    DpdPresentation<F> out;
    out.kind = DpdKind::hyperbolic;
    out.d_plus.add({false, p0}, Rational(BigInt(-1), BigInt(r)));
    out.d_minus.add({false, p1}, Rational(BigInt(-1), BigInt(d - r)));
    out.validate();
    return out;
}

// (A^1, -(1/r)[p+], -(1/(d-r))[p-] - sum [p_i]) with the r = 1 and r = d-1
// conventions dropping the corresponding fractional summand.
template <ExactField F>
DpdPresentation<F> special_gizatullin(long long d, long long r, F p_plus, F p_minus,
                                      const std::vector<F>& extra) {
    if (d < 3 || r < 1 || r > d - 1) fail("bad_params", "need d >= 3 and 1 <= r <= d-1");
    if (extra.empty()) fail("bad_params", "need a nonempty reduced divisor");
    if (r != 1 && r != d - 1 && p_plus == p_minus)
        fail("bad_params", "support points must differ");
    for (const auto& q : extra)
        if (q == p_plus || q == p_minus)
            fail("bad_params", "reduced divisor must avoid the fractional supports");
    DpdPresentation<F> out;
    out.kind = DpdKind::hyperbolic;
    if (r != 1) out.d_plus.add({false, p_plus}, Rational(BigInt(-1), BigInt(r)));
    if (r != d - 1) out.d_minus.add({false, p_minus}, Rational(BigInt(-1), BigInt(d - r)));
    for (const auto& q : extra) out.d_minus.add({false, q}, Rational(-1));
    out.validate();
    return out;
}

} // namespace a1fib
