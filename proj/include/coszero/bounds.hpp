#pragma once

// Explicit bound formulas: iterated base-2 logarithms over power towers, the
// iterated-log zero-count floor for restricted coefficients, the
// McGehee-Pigno-Smith L1 lower bound, and the support-size bound for P S_D f.
// Lower bounds are rounded down throughout.

#include "coszero/evaluation.hpp"
#include "coszero/mpfr.hpp"
#include "coszero/polynomial.hpp"
#include "coszero/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

inline constexpr mpfr_prec_t kBoundPrecision = 256;

/// COSZERO_PRECISION when set, never below 128 bits.
inline mpfr_prec_t bound_precision() {
    const int p = default_precision();
    return p == 53 ? kBoundPrecision : std::max<mpfr_prec_t>(128, p);
}

/// x = 2^2^...^top with `height` twos; height 0 is top itself.
struct Tower {
    unsigned height = 0;
    Mpfr top{bound_precision()};

    static Tower of(const Rational& x, mpfr_rnd_t rnd = MPFR_RNDD) {
        Tower t;
        t.top.set(x, rnd);
        return t;
    }
    static Tower of(double x) {
        Tower t;
        mpfr_set_d(t.top.get(), x, MPFR_RNDN);
        return t;
    }
    /// 2^2^...^top.
    static Tower power(unsigned height, double top) {
        Tower t = of(top);
        t.height = height;
        return t;
    }

    /// The value when it fits in a double (after collapsing small towers).
    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const {
        Mpfr v = top;
        for (unsigned i = 0; i < height; ++i) {
            if (mpfr_cmp_d(v.get(), 1100) > 0) return INFINITY;
            mpfr_exp2(v.get(), v.get(), rnd);
        }
        return v.to_double(rnd);
    }
    /// Comparison against a double, exact in the tower levels.
    bool at_least(double x) const {
        if (height == 0) return mpfr_cmp_d(top.get(), x) >= 0;
        if (x <= 0) return true;
        Tower l = *this;
        --l.height;
        return l.at_least(std::log2(x));
    }
};

/// Folds the tower into its top value; throws when that overflows.
inline Tower collapse(Tower x, mpfr_rnd_t rnd) {
    while (x.height > 0) {
        if (mpfr_cmp_d(x.top.get(), 1e9) > 0) throw std::overflow_error("tower value exceeds the floating range");
        mpfr_exp2(x.top.get(), x.top.get(), rnd);
        --x.height;
    }
    return x;
}

/// log_2 applied r times, rounded in direction rnd; throws when a logarithm
/// of a non-positive value is needed.
inline Tower iterated_log(unsigned r, Tower x, mpfr_rnd_t rnd = MPFR_RNDN) {
    for (unsigned i = 0; i < r; ++i) {
        if (x.height > 0) {
            --x.height;
            continue;
        }
        if (mpfr_sgn(x.top.get()) <= 0)
            throw std::domain_error("iterated_log: logarithm of a non-positive value at step " + std::to_string(i + 1));
        mpfr_log2(x.top.get(), x.top.get(), rnd);
    }
    return x;
}

inline double iterated_log(unsigned r, double x) { return iterated_log(r, Tower::of(x)).to_double(); }

struct ZeroFloor {
    double value = 0;        // floor(ratio)^(1/2)
    Integer floor_ratio = 0;
    bool below_threshold = true;
    std::string note;
    double numerator = 0, denominator = 0;  // rounded down / up
};

/// floor((L3 - 8 log2(2 M D) L3^(1/2)) / (2^17 log2(|R| + 1) L5^2))^(1/2)
/// with Lr = log_(r) |f(0)|; 0 below the threshold.
inline ZeroFloor restricted_zero_bound(const Tower& f0, const CoefficientSet& R) {
    ZeroFloor out;
    if (!f0.at_least(16)) {
        out.note = "below threshold: |f(0)| < 16";
        return out;
    }
    Tower l5, l3d, l3u;
    try {
        l5 = collapse(iterated_log(5, f0, MPFR_RNDU), MPFR_RNDU);
    } catch (const std::domain_error&) {
        out.note = "below threshold: log_(5)|f(0)| undefined";
        return out;
    }
    if (mpfr_sgn(l5.top.get()) <= 0) {
        out.note = "below threshold: log_(5)|f(0)| <= 0";
        return out;
    }
    l3d = collapse(iterated_log(3, f0, MPFR_RNDD), MPFR_RNDD);
    l3u = collapse(iterated_log(3, f0, MPFR_RNDU), MPFR_RNDU);
    const auto st = coefficient_stats(R);
    const mpfr_prec_t P = bound_precision();
    Mpfr c(P), s(P), num(P), den(P), t(P);
    // 8 log2(2 M D), rounded up
    c.set(2 * st.M * Rational(st.D), MPFR_RNDU);
    mpfr_log2(c.get(), c.get(), MPFR_RNDU);
    mpfr_mul_ui(c.get(), c.get(), 8, MPFR_RNDU);
    if (mpfr_sgn(c.get()) < 0) mpfr_set_zero(c.get(), 1);
    mpfr_sqrt(s.get(), l3u.top.get(), MPFR_RNDU);
    mpfr_mul(t.get(), c.get(), s.get(), MPFR_RNDU);
    mpfr_sub(num.get(), l3d.top.get(), t.get(), MPFR_RNDD);
    mpfr_set_ui(den.get(), static_cast<unsigned long>(R.size() + 1), MPFR_RNDU);
    mpfr_log2(den.get(), den.get(), MPFR_RNDU);
    mpfr_mul_2ui(den.get(), den.get(), 17, MPFR_RNDU);
    mpfr_sqr(t.get(), l5.top.get(), MPFR_RNDU);
    mpfr_mul(den.get(), den.get(), t.get(), MPFR_RNDU);
    out.numerator = num.to_double(MPFR_RNDD);
    out.denominator = den.to_double(MPFR_RNDU);
    if (mpfr_sgn(num.get()) < 0) {
        out.note = "below threshold: negative numerator";
        return out;
    }
    out.below_threshold = false;
    mpfr_div(t.get(), num.get(), den.get(), MPFR_RNDD);
    mpfr_floor(t.get(), t.get());
    mpfr_get_z(out.floor_ratio.get_mpz_t(), t.get(), MPFR_RNDD);
    mpfr_sqrt(t.get(), t.get(), MPFR_RNDD);
    out.value = t.to_double(MPFR_RNDD);
    if (out.value == 0) out.value = 0;  // no -0 from the rounded-down subtraction
    if (out.numerator == 0) out.numerator = 0;
    return out;
}

inline ZeroFloor restricted_zero_bound(const Rational& f0, const CoefficientSet& R) {
    return restricted_zero_bound(Tower::of(abs_value(f0), MPFR_RNDD), R);
}

/// The 0/1 case: f_A with |A| = N.
inline ZeroFloor subset_zero_bound(long N) { return restricted_zero_bound(Rational(N), CoefficientSet{Rational(0), Rational(1)}); }

/// (1/60) sum_i |C_i| / i over the support sorted increasingly.
inline Rational mps_bound(const ExponentialPolynomial& f) {
    if (f.is_zero()) throw std::invalid_argument("mps_bound: zero polynomial");
    if (!f.is_rational()) throw std::domain_error("mps_bound: coefficients must be rational");
    Rational s = 0;
    long i = 0;
    for (const auto& [r, a] : f.terms()) s += abs_value(a.to_rational()) / Rational(++i);
    Rational out = s / 60;
    out.canonicalize();
    return out;
}

inline Rational mps_bound(const CosinePolynomial& f) { return mps_bound(ExponentialPolynomial::from_cosine(f)); }

/// mps_bound of a cosine polynomial, rounded down to a double without
/// forming the exact harmonic-type sum.
inline double mps_bound_down(const CosinePolynomial& f) {
    if (f.is_zero()) throw std::invalid_argument("mps_bound: zero polynomial");
    const mpfr_prec_t P = bound_precision();
    Mpfr s(P, 0.0), term(P), a(P);
    long i = 0;
    auto add = [&](const Rational& c) {
        if (c == 0) return;
        ++i;
        a.set(abs_value(c), MPFR_RNDD);
        mpfr_div_si(term.get(), a.get(), i, MPFR_RNDD);
        mpfr_add(s.get(), s.get(), term.get(), MPFR_RNDD);
    };
    const long n = f.degree();
    for (long r = n; r >= 1; --r) add(f.coeff(static_cast<std::size_t>(r)) / 2);
    add(f.coeff(0));
    for (long r = 1; r <= n; ++r) add(f.coeff(static_cast<std::size_t>(r)) / 2);
    mpfr_div_ui(s.get(), s.get(), 60, MPFR_RNDD);
    return s.to_double(MPFR_RNDD);
}

struct MpsCheck {
    Rational bound;
    Enclosure l1;
    bool holds = false;  // l1.lower >= bound, compared exactly
};

inline MpsCheck mps_check(const CosinePolynomial& f) {
    MpsCheck c;
    c.bound = mps_bound(f);
    c.l1 = l1_norm_exact(f);
    c.holds = Rational(c.l1.lower) >= c.bound;
    return c;
}

struct SupportBound {
    double log_log_support = 0;  // bound on log2 log2 |{r : (Q f)^(r) != 0}|
    double degree_bound = 0;     // bound on deg Q
};

/// 2^14 k^2 (log2 log2 (2k+3))^2 log2|R| + 8k log2 M(R) + log2(1/eps), and
/// deg Q <= 2^12 (k log2 log2 (2k+3))^2.
inline SupportBound support_bound(long k, const CoefficientSet& R, const Rational& eps) {
    if (eps == 0) throw std::invalid_argument("support bound: epsilon must be positive");
    if (k < 1 || R.size() < 2 || eps < 0 || eps > 1)
        throw std::invalid_argument("support bound: need k >= 1, |R| >= 2, 0 < eps <= 1");
    const auto st = coefficient_stats(R);
    const mpfr_prec_t P = bound_precision();
    Mpfr ll(P), a(P), b(P);
    mpfr_set_si(ll.get(), 2 * k + 3, MPFR_RNDN);
    mpfr_log2(ll.get(), ll.get(), MPFR_RNDU);
    mpfr_log2(ll.get(), ll.get(), MPFR_RNDU);
    const double kk = static_cast<double>(k);
    mpfr_sqr(a.get(), ll.get(), MPFR_RNDU);
    mpfr_mul_d(a.get(), a.get(), 16384.0 * kk * kk, MPFR_RNDU);
    mpfr_set_ui(b.get(), static_cast<unsigned long>(R.size()), MPFR_RNDU);
    mpfr_log2(b.get(), b.get(), MPFR_RNDU);
    mpfr_mul(a.get(), a.get(), b.get(), MPFR_RNDU);
    b.set(st.M, MPFR_RNDU);
    mpfr_log2(b.get(), b.get(), MPFR_RNDU);
    mpfr_mul_d(b.get(), b.get(), 8 * kk, MPFR_RNDU);
    mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDU);
    b.set(1 / eps, MPFR_RNDU);
    mpfr_log2(b.get(), b.get(), MPFR_RNDU);
    mpfr_add(a.get(), a.get(), b.get(), MPFR_RNDU);
    SupportBound out;
    out.log_log_support = a.to_double(MPFR_RNDU);
    mpfr_mul_d(b.get(), ll.get(), kk, MPFR_RNDU);
    mpfr_sqr(b.get(), b.get(), MPFR_RNDU);
    mpfr_mul_2ui(b.get(), b.get(), 12, MPFR_RNDU);
    out.degree_bound = b.to_double(MPFR_RNDU);
    return out;
}

}  // namespace coszero
