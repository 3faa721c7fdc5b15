#pragma once

// Exact scalars. Rational is GMP's canonical mpq_class: always reduced with a
// positive denominator.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coszero {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Rejects zero denominators and anything else.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
    s = s.substr(start);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t slash = s.find('/');
    auto valid_int = [](std::string_view t, bool allow_sign) {
        if (t.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (num[0] == '+') num = num.substr(1);
    Integer n(num, 10), d(den, 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline double to_double(const Rational& q) { return q.get_d(); }

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Least common multiple of the denominators (1 for an empty range).
inline Integer common_denominator(const std::vector<Rational>& xs) {
    Integer d = 1;
    for (const auto& x : xs) d = lcm(d, x.get_den());
    return d;
}

inline Rational rational_pow(const Rational& base, unsigned long e) {
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), e);
    return Rational(n, d);
}

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace coszero
