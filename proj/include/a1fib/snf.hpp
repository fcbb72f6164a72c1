#pragma once

#include <vector>

#include "a1fib/rational.hpp"

namespace a1fib {

struct SmithResult {
    std::vector<BigInt> divisors; // d1 | d2 | ... (nonzero elementary divisors)
    std::size_t rank = 0;
    std::size_t cols = 0;
};

// Smith normal form of an integer matrix by gcd pivoting.
inline SmithResult smith_normal_form(std::vector<std::vector<BigInt>> m) {
    SmithResult res;
    if (m.empty()) return res;
    std::size_t rows = m.size(), cols = m[0].size();
    res.cols = cols;
    std::size_t t = 0;
    auto abs = [](const BigInt& x) { return x < 0 ? BigInt(-x) : x; };
    while (t < rows && t < cols) {
        // find a nonzero pivot in the lower-right block
        std::size_t pr = t, pc = t;
        bool found = false;
        BigInt best = 0;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (m[i][j] != 0 && (!found || abs(m[i][j]) < best)) {
                    best = abs(m[i][j]);
                    pr = i;
                    pc = j;
                    found = true;
                }
        if (!found) break;
        std::swap(m[t], m[pr]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (m[i][t] != 0) {
                    BigInt q = m[i][t] / m[t][t];
                    for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
                    if (m[i][t] != 0) {
                        std::swap(m[t], m[i]);
                        clean = false;
                    }
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (m[t][j] != 0) {
                    BigInt q = m[t][j] / m[t][t];
                    for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
                    if (m[t][j] != 0) {
                        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][j]);
                        clean = false;
                    }
                }
        }
        ++t;
    }
    // enforce the divisibility chain d1 | d2 | ...
    for (std::size_t i = 0; i < t; ++i)
        if (m[i][i] < 0) m[i][i] = -m[i][i];
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < t; ++i)
            if (m[i + 1][i + 1] % m[i][i] != 0) {
                BigInt a = m[i][i], b = m[i + 1][i + 1];
                BigInt g = boost::multiprecision::gcd(a, b);
                m[i][i] = g;
                m[i + 1][i + 1] = a / g * b;
                changed = true;
            }
    }
    res.rank = t;
    for (std::size_t i = 0; i < t; ++i) res.divisors.push_back(m[i][i]);
    return res;
}

} // namespace a1fib
