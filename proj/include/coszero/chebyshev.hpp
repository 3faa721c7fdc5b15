#pragma once

// Chebyshev-basis utilities. A cosine polynomial sum c_r cos(r t) is the
// polynomial sum c_r T_r(x) evaluated at x = cos t, so all conversions here
// work on plain Chebyshev coefficient vectors.

#include "coszero/modular.hpp"
#include "coszero/qpoly.hpp"

#include <stdexcept>
#include <vector>

namespace coszero {

/// Integer Chebyshev coefficients to integer monomial coefficients
/// (backward Clenshaw recurrence on polynomials, O(n^2)).
inline IntPoly cheb_to_monomial(const std::vector<Integer>& c) {
    const std::size_t n1 = c.size();
    if (n1 == 0) return {};
    if (n1 == 1) return IntPoly{c[0]};
    // b_k = c_k + 2x b_{k+1} - b_{k+2};  result = c_0 + x b_1 - b_2
    IntPoly b1, b2;
    for (std::size_t k = n1 - 1; k >= 1; --k) {
        IntPoly b(n1, Integer(0));
        b[0] = c[k];
        for (std::size_t i = 0; i < b1.size(); ++i)
            if (b1[i] != 0) b[i + 1] += 2 * b1[i];
        for (std::size_t i = 0; i < b2.size(); ++i) b[i] -= b2[i];
        trim(b);
        b2 = std::move(b1);
        b1 = std::move(b);
    }
    IntPoly out(n1, Integer(0));
    out[0] = c[0];
    for (std::size_t i = 0; i < b1.size(); ++i) out[i + 1] += b1[i];
    for (std::size_t i = 0; i < b2.size(); ++i) out[i] -= b2[i];
    trim(out);
    return out;
}

inline QPoly cheb_to_monomial(const std::vector<Rational>& c) {
    Integer den = common_denominator(c);
    std::vector<Integer> ci(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        Rational s = c[i] * den;
        ci[i] = s.get_num();
    }
    QPoly g = to_qpoly(cheb_to_monomial(ci));
    return (1 / Rational(den)) * g;
}

/// Same conversion modulo p.
inline ModPoly cheb_to_monomial_mod(const std::vector<Integer>& c, std::uint64_t p) {
    const std::size_t n1 = c.size();
    ModPoly out(n1, 0);
    if (n1 == 0) return out;
    if (n1 == 1) {
        out[0] = modp::reduce(c[0], p);
        modp::trim(out);
        return out;
    }
    ModPoly b1(n1, 0), b2(n1, 0), b(n1, 0);
    for (std::size_t k = n1 - 1; k >= 1; --k) {
        std::fill(b.begin(), b.end(), 0);
        b[0] = modp::reduce(c[k], p);
        for (std::size_t i = 0; i + 1 < n1; ++i) b[i + 1] = modp::add(b[i + 1], modp::add(b1[i], b1[i], p), p);
        for (std::size_t i = 0; i < n1; ++i) b[i] = modp::sub(b[i], b2[i], p);
        std::swap(b2, b1);
        std::swap(b1, b);
    }
    out[0] = modp::reduce(c[0], p);
    for (std::size_t i = 0; i + 1 < n1; ++i) out[i + 1] = modp::add(out[i + 1], b1[i], p);
    for (std::size_t i = 0; i < n1; ++i) out[i] = modp::sub(out[i], b2[i], p);
    modp::trim(out);
    return out;
}

/// Monomial coefficients to Chebyshev coefficients (Horner in the Chebyshev
/// basis, kept integral by carrying a power-of-two scale).
inline std::vector<Rational> monomial_to_cheb(const QPoly& g) {
    if (g.is_zero()) return {};
    IntPoly a = g.coeffs().empty() ? IntPoly{} : IntPoly(g.coeffs().size());
    Integer den = common_denominator(g.coeffs());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rational s = g.coeffs()[i] * den;
        a[i] = s.get_num();
    }
    const std::size_t n = a.size() - 1;
    std::vector<Integer> v(n + 1, Integer(0));  // 2^s * partial Horner value
    std::size_t len = 0;
    unsigned long s = 0;
    for (std::size_t k = n + 1; k-- > 0;) {
        // v <- 2x * v   using 2x T_0 = 2 T_1, 2x T_j = T_{j+1} + T_{j-1}
        if (len > 0) {
            std::vector<Integer> w(len + 1, Integer(0));
            for (std::size_t j = 0; j < len; ++j) {
                if (v[j] == 0) continue;
                if (j == 0) {
                    w[1] += 2 * v[0];
                } else {
                    w[j + 1] += v[j];
                    w[j - 1] += v[j];
                }
            }
            for (std::size_t j = 0; j <= len; ++j) v[j] = w[j];
            ++len;
            ++s;
        }
        Integer t;
        mpz_mul_2exp(t.get_mpz_t(), a[k].get_mpz_t(), s);
        v[0] += t;
        if (len == 0) len = 1;
    }
    std::vector<Rational> out(len);
    Integer scale;
    mpz_mul_2exp(scale.get_mpz_t(), den.get_mpz_t(), s);
    for (std::size_t j = 0; j < len; ++j) {
        out[j] = Rational(v[j], scale);
        out[j].canonicalize();
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

/// Sum c_r T_r(x) for rational x (Clenshaw).
inline Rational cheb_eval(const std::vector<Rational>& c, const Rational& x) {
    if (c.empty()) return 0;
    Rational b1 = 0, b2 = 0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
        Rational b = c[k] + 2 * x * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return c[0] + x * b1 - b2;
}

/// Exact quotient of sum g_k T_k by (x - c). Throws if (x - c) does not divide.
inline std::vector<Rational> cheb_deflate(const std::vector<Rational>& g, const Rational& c) {
    if (g.size() < 2) throw std::domain_error("cheb_deflate: degree must be at least 1");
    const std::size_t n = g.size() - 1;
    std::vector<Rational> b(n + 2, Rational(0));  // b[n], b[n+1] stay 0
    b[n - 1] = 2 * g[n];
    for (std::size_t k = n - 1; k >= 2; --k) b[k - 1] = 2 * (g[k] + c * b[k]) - b[k + 1];
    b[0] = g[1] - b[2] / 2 + c * b[1];
    if (g[0] != b[1] / 2 - c * b[0]) throw std::domain_error("cheb_deflate: not a root");
    b.resize(n);
    return b;
}

/// Product of two Chebyshev series: T_i T_j = (T_{i+j} + T_{|i-j|}) / 2.
template <class T>
std::vector<T> cheb_multiply(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<T> out(a.size() + b.size() - 1, T(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == T(0)) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            T h = a[i] * b[j] / T(2);
            out[i + j] += h;
            out[i > j ? i - j : j - i] += h;
        }
    }
    return out;
}

}  // namespace coszero
