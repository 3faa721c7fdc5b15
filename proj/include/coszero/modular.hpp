#pragma once

// Integer polynomials and their images modulo word-size primes: square-free
// certificates and the multi-modular gcd used on high-degree inputs.

#include "coszero/qpoly.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coszero {

using IntPoly = std::vector<Integer>;  // monomial coefficients, low degree first
using ModPoly = std::vector<std::uint64_t>;

namespace modp {

inline std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
inline std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    std::uint64_t s = a + b;
    return s >= p ? s - p : s;
}
inline std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) { return a >= b ? a - b : a + p - b; }

inline std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    while (e) {
        if (e & 1) r = mul(r, a, p);
        a = mul(a, a, p);
        e >>= 1;
    }
    return r;
}
inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
    if (a == 0) throw std::domain_error("modular inverse of zero");
    return pow(a, p - 2, p);
}

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// The i-th prime below 2^62 (descending), cached.
inline std::uint64_t large_prime(std::size_t i) {
    static std::vector<std::uint64_t> primes;
    static std::uint64_t cursor = (1ULL << 62) - 1;
    while (primes.size() <= i) {
        while (!is_prime(cursor)) cursor -= 2;
        primes.push_back(cursor);
        cursor -= 2;
    }
    return primes[i];
}

inline void trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t reduce(const Integer& x, std::uint64_t p) {
    return mpz_fdiv_ui(x.get_mpz_t(), p);
}

inline ModPoly reduce(const IntPoly& a, std::uint64_t p) {
    ModPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = reduce(a[i], p);
    trim(r);
    return r;
}

inline ModPoly derivative(const ModPoly& a, std::uint64_t p) {
    if (a.size() <= 1) return {};
    ModPoly d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = mul(a[i], i % p, p);
    trim(d);
    return d;
}

/// In-place remainder a mod b (b nonzero, trimmed).
inline void rem_inplace(ModPoly& a, const ModPoly& b, std::uint64_t p) {
    const std::size_t db = b.size() - 1;
    const std::uint64_t il = inv(b.back(), p);
    while (a.size() >= b.size()) {
        std::uint64_t q = mul(a.back(), il, p);
        const std::size_t shift = a.size() - b.size();
        if (q != 0)
            for (std::size_t j = 0; j <= db; ++j) a[shift + j] = sub(a[shift + j], mul(q, b[j], p), p);
        a.pop_back();
        trim(a);
    }
}

/// Monic gcd over F_p.
inline ModPoly gcd(ModPoly a, ModPoly b, std::uint64_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        rem_inplace(a, b, p);
        std::swap(a, b);
    }
    if (a.empty()) return a;
    std::uint64_t il = inv(a.back(), p);
    for (auto& x : a) x = mul(x, il, p);
    return a;
}

}  // namespace modp

inline long degree(const IntPoly& a) { return static_cast<long>(a.size()) - 1; }

inline void trim(IntPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Integer content(const IntPoly& a) {
    Integer g = 0;
    for (const auto& x : a) {
        g = gcd(g, x);
        if (g == 1) break;
    }
    return g;
}

/// Divides out the content and makes the leading coefficient positive.
inline IntPoly primitive_part(IntPoly a) {
    trim(a);
    if (a.empty()) return a;
    Integer g = content(a);
    if (a.back() < 0) g = -g;
    for (auto& x : a) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return a;
}

/// Primitive integer multiple of a rational polynomial.
inline IntPoly integer_primitive(const QPoly& f) {
    Integer den = common_denominator(f.coeffs());
    IntPoly a(f.coeffs().size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Rational s = f.coeffs()[i] * den;
        a[i] = s.get_num();
    }
    return primitive_part(std::move(a));
}

inline QPoly to_qpoly(const IntPoly& a) {
    std::vector<Rational> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = Rational(a[i]);
    return QPoly(std::move(c));
}

inline IntPoly derivative(const IntPoly& a) {
    if (a.size() <= 1) return {};
    IntPoly d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<unsigned long>(i);
    return d;
}

/// True when b divides a in Z[x]; the quotient is stored if requested.
inline bool divides_exactly(const IntPoly& a, const IntPoly& b, IntPoly* quotient = nullptr) {
    if (b.empty()) throw std::domain_error("division by zero polynomial");
    if (a.empty()) {
        if (quotient) quotient->clear();
        return true;
    }
    if (a.size() < b.size()) return false;
    IntPoly r(a);
    IntPoly q(a.size() - b.size() + 1);
    const std::size_t db = b.size() - 1;
    Integer t;
    for (std::size_t k = q.size(); k-- > 0;) {
        const Integer& top = r[k + db];
        if (!mpz_divisible_p(top.get_mpz_t(), b.back().get_mpz_t())) return false;
        mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), b.back().get_mpz_t());
        q[k] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) r[k + j] -= t * b[j];
    }
    for (std::size_t i = 0; i < db; ++i)
        if (r[i] != 0) return false;
    if (quotient) *quotient = std::move(q);
    return true;
}

/// True when a certificate prime shows gcd(g, g') = 1, i.e. g is square-free
/// over Q. False means no certificate was found among `tries` primes.
inline bool squarefree_certificate(const IntPoly& g, int tries = 3) {
    if (degree(g) <= 1) return true;
    for (int i = 0, used = 0; used < tries; ++i) {
        std::uint64_t p = modp::large_prime(static_cast<std::size_t>(i));
        if (modp::reduce(g.back(), p) == 0) continue;
        ++used;
        ModPoly gp = modp::reduce(g, p);
        ModPoly h = modp::gcd(gp, modp::derivative(gp, p), p);
        if (h.size() == 1) return true;
    }
    return false;
}

/// gcd of two integer polynomials (primitive, positive leading coefficient)
/// by Chinese remaindering of modular images, verified by exact division.
inline IntPoly modular_gcd(const IntPoly& a0, const IntPoly& b0) {
    IntPoly a = primitive_part(a0), b = primitive_part(b0);
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.size() == 1 || b.size() == 1) return IntPoly{Integer(1)};
    const Integer gamma = gcd(a.back(), b.back());
    long best = -1;
    IntPoly residues;
    Integer modulus = 1;
    IntPoly candidate;
    for (std::size_t i = 0;; ++i) {
        if (i > 4000) throw std::runtime_error("modular gcd did not stabilise");
        const std::uint64_t p = modp::large_prime(i);
        if (modp::reduce(a.back(), p) == 0 || modp::reduce(b.back(), p) == 0) continue;
        ModPoly g = modp::gcd(modp::reduce(a, p), modp::reduce(b, p), p);
        const long d = static_cast<long>(g.size()) - 1;
        if (d == 0) return IntPoly{Integer(1)};
        if (best >= 0 && d > best) continue;  // unlucky prime
        const std::uint64_t gp = modp::reduce(gamma, p);
        for (auto& x : g) x = modp::mul(x, gp, p);
        if (best < 0 || d < best) {
            best = d;
            residues.assign(g.size(), Integer(0));
            for (std::size_t j = 0; j < g.size(); ++j) residues[j] = Integer(static_cast<unsigned long>(g[j]));
            modulus = Integer(static_cast<unsigned long>(p));
            candidate.clear();
            continue;
        }
        // CRT step: x = r + M * ((g - r) * M^{-1} mod p)
        const std::uint64_t minv = modp::inv(modp::reduce(modulus, p), p);
        for (std::size_t j = 0; j < g.size(); ++j) {
            std::uint64_t rj = modp::reduce(residues[j], p);
            std::uint64_t t = modp::mul(modp::sub(g[j], rj, p), minv, p);
            residues[j] += modulus * Integer(static_cast<unsigned long>(t));
        }
        modulus *= Integer(static_cast<unsigned long>(p));
        const Integer half = modulus / 2;
        IntPoly lifted(residues);
        for (auto& x : lifted)
            if (x > half) x -= modulus;
        IntPoly next = primitive_part(lifted);
        if (next == candidate && divides_exactly(a, next) && divides_exactly(b, next)) return next;
        candidate = std::move(next);
    }
}

/// Yun's square-free decomposition over Z[x] with modular gcds. Factor i has
/// multiplicity i+1; factors are primitive with positive leading coefficient.
/// Every division below is by a primitive divisor, hence exact in Z[x].
inline std::vector<IntPoly> squarefree_decomposition_modular(const IntPoly& g) {
    std::vector<IntPoly> out;
    IntPoly a = primitive_part(g);
    if (degree(a) < 1) return out;
    auto quotient = [](const IntPoly& num, const IntPoly& den) {
        IntPoly q;
        if (!divides_exactly(num, den, &q)) throw std::logic_error("square-free decomposition: inexact division");
        return q;
    };
    auto minus = [](IntPoly x, const IntPoly& y) {
        if (x.size() < y.size()) x.resize(y.size(), Integer(0));
        for (std::size_t i = 0; i < y.size(); ++i) x[i] -= y[i];
        trim(x);
        return x;
    };
    IntPoly b = derivative(a);
    IntPoly c = modular_gcd(a, b);
    IntPoly w = quotient(a, c);
    IntPoly y = quotient(b, c);
    IntPoly z = minus(y, derivative(w));
    while (degree(w) > 0) {
        IntPoly f = z.empty() ? w : modular_gcd(w, z);
        out.push_back(f);
        w = quotient(w, f);
        y = quotient(z, f);
        z = minus(y, derivative(w));
    }
    while (!out.empty() && degree(out.back()) == 0) out.pop_back();
    return out;
}

}  // namespace coszero
