#pragma once

// Sturm sequences over Z[x] built from sign-corrected primitive pseudo-remainders.

#include "coszero/modular.hpp"

#include <stdexcept>
#include <vector>

namespace coszero {

namespace detail {

inline int sign_at(const IntPoly& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + Rational(*it);
    return sgn(acc);
}

/// lc(b)^(deg a - deg b + 1) * a mod b.
inline IntPoly pseudo_remainder(IntPoly a, const IntPoly& b) {
    const std::size_t db = b.size() - 1;
    if (a.size() < b.size()) return a;
    const std::size_t steps = a.size() - b.size() + 1;
    const Integer& lb = b.back();
    for (std::size_t s = 0; s < steps; ++s) {
        const std::size_t top = a.size() - 1 - s;
        Integer lead = a[top];
        for (auto& x : a) x *= lb;
        if (lead != 0) {
            const std::size_t shift = top - db;
            for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= lead * b[j];
        }
    }
    a.resize(db);
    trim(a);
    return a;
}

}  // namespace detail

/// Sturm sequence p, p', -rem(...), ... with each term made primitive.
inline std::vector<IntPoly> sturm_sequence(const IntPoly& p) {
    std::vector<IntPoly> seq;
    IntPoly a = primitive_part(p);
    if (a.empty()) throw std::domain_error("Sturm sequence of the zero polynomial");
    seq.push_back(a);
    IntPoly b = derivative(a);
    if (b.empty()) return seq;
    {
        Integer g = content(b);
        for (auto& x : b) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    }
    seq.push_back(b);
    while (seq.back().size() > 1) {
        const IntPoly& x = seq[seq.size() - 2];
        const IntPoly& y = seq.back();
        IntPoly r = detail::pseudo_remainder(x, y);
        if (r.empty()) break;
        const std::size_t delta = x.size() - y.size();
        // prem = lc(y)^(delta+1) * rem; the next term is -rem up to a positive factor
        int s = -1;
        if (y.back() < 0 && (delta + 1) % 2 == 1) s = 1;
        Integer g = content(r);
        if (s < 0) g = -g;
        for (auto& c : r) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        seq.push_back(std::move(r));
    }
    return seq;
}

inline int sign_variations(const std::vector<IntPoly>& seq, const Rational& x) {
    int prev = 0, count = 0;
    for (const auto& p : seq) {
        int s = detail::sign_at(p, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

/// Number of distinct real roots of p in (lo, hi); p(lo), p(hi) must be nonzero.
inline int sturm_count(const IntPoly& p, const Rational& lo, const Rational& hi) {
    auto seq = sturm_sequence(p);
    if (detail::sign_at(seq.front(), lo) == 0 || detail::sign_at(seq.front(), hi) == 0)
        throw std::domain_error("sturm_count: endpoint is a root");
    return sign_variations(seq, lo) - sign_variations(seq, hi);
}

}  // namespace coszero
