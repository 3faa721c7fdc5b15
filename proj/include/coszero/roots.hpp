#pragma once

// Validated isolation of the zeros of a cosine polynomial in (0, pi).
//
// Points are angles t = pi * j / 2^e with odd j. cos(pi j / 2^e) is algebraic
// of degree 2^(e-1) over Q, so once 2^(e-1) exceeds the degree n of a
// rational cosine polynomial such a point is never a zero of it. Every cell
// [a, b] between such points gets a Taylor model at its midpoint c with
// radius h: the scaled derivatives f^(k)(c) h^k / k! for k <= K, each with a
// rigorous error, plus the tail sum |c_r| (r h)^(K+1) / (K+1)!. Either f has
// no zero on the cell, or f' has constant sign and the zero count is read off
// the endpoint signs, or the cell is split.

#include "coszero/mpfr.hpp"
#include "coszero/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

/// num / 2^exp, an angle measured in units of pi.
struct Dyadic {
    unsigned __int128 num = 0;
    int exp = 0;

    static Dyadic make(unsigned __int128 num, int exp) {
        Dyadic d{num, exp};
        d.normalize();
        return d;
    }
    void normalize() {
        if (num == 0) {
            exp = 0;
            return;
        }
        while (exp > 0 && (num & 1) == 0) {
            num >>= 1;
            --exp;
        }
    }
    /// Largest e with a point of level e: the reduced denominator exponent.
    int level() const { return num == 0 ? 0 : exp; }
    long double to_long_double() const { return std::ldexp(static_cast<long double>(num), -exp); }
    double to_double() const { return static_cast<double>(to_long_double()); }

    Integer numerator() const {
        Integer hi(static_cast<unsigned long>(num >> 64)), lo(static_cast<unsigned long>(num & ~0ULL));
        Integer out;
        mpz_mul_2exp(out.get_mpz_t(), hi.get_mpz_t(), 64);
        return out + lo;
    }
    Rational to_rational() const {
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(exp));
        Rational q(numerator(), den);
        q.canonicalize();
        return q;
    }
    std::string to_string() const { return coszero::to_string(to_rational()); }

    friend bool operator<(const Dyadic& a, const Dyadic& b) {
        const int e = std::max(a.exp, b.exp);
        return (a.num << (e - a.exp)) < (b.num << (e - b.exp));
    }
    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.num == b.num && a.exp == b.exp; }
};

/// An isolating interval [lo, hi] (in units of pi) containing exactly one
/// simple zero, with f(lo) and f(hi) of opposite signs.
struct RootBracket {
    Dyadic lo, hi;
    int sign_lo = 0;  // sign of f at lo
    double width() const { return static_cast<double>(hi.to_long_double() - lo.to_long_double()); }
    double midpoint() const { return static_cast<double>((hi.to_long_double() + lo.to_long_double()) / 2); }
};

/// Scaled Taylor coefficients T_k = f^(k)(c) h^k / k!, k = 0..K, with
/// absolute errors, and tail >= max over the cell of |f^(K+1)| h^(K+1) / (K+1)!.
struct TaylorModel {
    std::vector<double> t, err;
    double tail = 0;
    bool high = false;

    /// |f| > 0 on [c - h, c + h].
    bool excludes_zero() const {
        double rest = tail;
        for (std::size_t k = 1; k < t.size(); ++k) rest += std::abs(t[k]) + err[k];
        return std::abs(t[0]) - err[0] > rest * (1 + 1e-12);
    }
    /// |f'| > 0 on [c - h, c + h].
    bool monotone() const {
        const std::size_t K = t.size() - 1;
        double rest = static_cast<double>(K + 1) * tail;
        for (std::size_t k = 2; k <= K; ++k) rest += static_cast<double>(k) * (std::abs(t[k]) + err[k]);
        return std::abs(t[1]) - err[1] > rest * (1 + 1e-12);
    }
    /// Rounding error is a visible share of the decisive terms.
    bool noisy() const { return err[0] > 0.01 * std::abs(t[0]) || err[1] > 0.01 * std::abs(t[1]); }
};

struct PointValue {
    double f = 0, ef = 0, df = 0, edf = 0;
    bool high = false;
    int sign() const { return std::abs(f) > ef ? (f > 0 ? 1 : -1) : 0; }
};

/// Rigorous evaluator of sum c_r cos(r t) and its t-derivative at dyadic
/// multiples of pi, in double (rotation recurrence) or in MPFR.
class CellEvaluator {
public:
    static constexpr mpfr_prec_t kHighPrecision = 320;

    explicit CellEvaluator(const std::vector<Rational>& coeffs) {
        if (coeffs.empty()) throw std::invalid_argument("CellEvaluator: zero polynomial");
        Rational big = 0;
        for (const auto& x : coeffs) big = std::max(big, abs_value(x));
        scaled_.resize(coeffs.size());
        c_.resize(coeffs.size());
        for (std::size_t r = 0; r < coeffs.size(); ++r) {
            scaled_[r] = coeffs[r] / big;
            c_[r] = scaled_[r].get_d();
            const double a = std::abs(c_[r]) * (1 + 0x1p-52), rr = static_cast<double>(r);
            s0_ += a;
            s1_ += a * rr;
            s2_ += a * rr * rr;
        }
        n_ = coeffs.size() - 1;
        scale_ = big;
    }

    /// Values are reported for coeffs / scale().
    const Rational& scale() const { return scale_; }

    std::size_t degree() const { return n_; }

    PointValue eval(const Dyadic& t, bool high) const { return high ? eval_high(t) : eval_double(t); }

    PointValue eval_double(const Dyadic& t) const { return eval_angle(t.numerator(), t.exp, false); }
    PointValue eval_high(const Dyadic& t) const { return eval_angle(t.numerator(), t.exp, true); }

    /// Value and derivative at t = pi * num / 2^e.
    PointValue eval_angle(const Integer& num, int e, bool high) const {
        Mpfr th(high ? kHighPrecision + 32 : 128);
        set_pi_dyadic(th, num, static_cast<unsigned long>(e));
        return high ? rotate_high(th) : rotate_double(th);
    }
    /// Value and derivative at t = pi * q for a rational q.
    PointValue eval_angle(const Rational& q, bool high) const {
        Mpfr th(high ? kHighPrecision + 32 : 128);
        set_pi_dyadic(th, q.get_num(), 0);
        mpfr_div_z(th.get(), th.get(), q.get_den_mpz_t(), MPFR_RNDN);
        return high ? rotate_high(th) : rotate_double(th);
    }

    /// Taylor model at the midpoint of [a, b].
    TaylorModel taylor(const Dyadic& a, const Dyadic& b, bool high) const {
        const int E = std::max(a.exp, b.exp);
        const unsigned __int128 A = a.num << (E - a.exp), B = b.num << (E - b.exp);
        const Dyadic c = Dyadic::make(A + B, E + 1);  // (a + b) / 2
        const Dyadic h = Dyadic::make(B - A, E + 1);  // (b - a) / 2
        return high ? taylor_high(c, h) : taylor_double(c, h);
    }

private:
    static constexpr int kDoubleOrder = 16;
    static constexpr int kHighOrder = 30;

    // d^k/dt^k cos(r t) = r^k * {cos, -sin, -cos, sin}[k mod 4](r t)
    static double derivative_phase(int k, double cr, double sr) {
        switch (k & 3) {
            case 0: return cr;
            case 1: return -sr;
            case 2: return -cr;
            default: return sr;
        }
    }

    TaylorModel taylor_double(const Dyadic& c, const Dyadic& h) const {
        const int K = kDoubleOrder;
        Mpfr th(128), hh(128);
        set_pi_dyadic(th, c.numerator(), static_cast<unsigned long>(c.exp));
        set_pi_dyadic(hh, h.numerator(), static_cast<unsigned long>(h.exp));
        Mpfr cw(128), sw(128);
        mpfr_sin_cos(sw.get(), cw.get(), th.get(), MPFR_RNDN);
        const double wr = cw.to_double(), wi = sw.to_double();
        const double hd = hh.to_double(MPFR_RNDU);
        TaylorModel m;
        m.t.assign(K + 1, 0.0);
        m.err.assign(K + 1, 0.0);
        const double u = 0x1p-53, nn = static_cast<double>(n_);
        double zr = 1, zi = 0, tail = 0;
        std::vector<double> wsum(K + 1, 0.0);
        for (std::size_t r = 0; r <= n_; ++r) {
            if (r > 0) {
                const double nr = zr * wr - zi * wi;
                const double ni = zr * wi + zi * wr;
                zr = nr;
                zi = ni;
            }
            if (c_[r] == 0) continue;
            const double rh = static_cast<double>(r) * hd, ac = std::abs(c_[r]);
            const double per = nn + 4 + 2 * K + 4 * static_cast<double>(r);
            double p = 1;  // (r h)^k / k!
            for (int k = 0; k <= K; ++k) {
                if (k > 0) p *= rh / k;
                m.t[k] += c_[r] * p * derivative_phase(k, zr, zi);
                wsum[k] += ac * p * per;
            }
            tail += ac * p * rh / (K + 1);
        }
        for (int k = 0; k <= K; ++k) m.err[k] = 1.01 * u * wsum[k] + 1e-300 * (nn + 1);
        m.tail = tail * (1 + 1e-12) + 1e-300;
        return m;
    }

    TaylorModel taylor_high(const Dyadic& c, const Dyadic& h) const {
        const int K = kHighOrder;
        const mpfr_prec_t P = kHighPrecision;
        ensure_high();
        Mpfr th(P + 32), hh(P + 32);
        set_pi_dyadic(th, c.numerator(), static_cast<unsigned long>(c.exp));
        set_pi_dyadic(hh, h.numerator(), static_cast<unsigned long>(h.exp));
        Mpfr wr(P), wi(P), zr(P, 1.0), zi(P, 0.0), nr(P), ni(P), tmp(P), rh(P), p(P), term(P);
        mpfr_sin_cos(wi.get(), wr.get(), th.get(), MPFR_RNDN);
        std::vector<Mpfr> acc;
        for (int k = 0; k <= K; ++k) acc.emplace_back(P, 0.0);
        const double hd = hh.to_double(MPFR_RNDU), nn = static_cast<double>(n_);
        std::vector<double> wsum(K + 1, 0.0);
        double tail = 0;
        for (std::size_t r = 0; r <= n_; ++r) {
            if (r > 0) {
                mpfr_mul(nr.get(), zr.get(), wr.get(), MPFR_RNDN);
                mpfr_mul(tmp.get(), zi.get(), wi.get(), MPFR_RNDN);
                mpfr_sub(nr.get(), nr.get(), tmp.get(), MPFR_RNDN);
                mpfr_mul(ni.get(), zr.get(), wi.get(), MPFR_RNDN);
                mpfr_mul(tmp.get(), zi.get(), wr.get(), MPFR_RNDN);
                mpfr_add(ni.get(), ni.get(), tmp.get(), MPFR_RNDN);
                mpfr_swap(zr.get(), nr.get());
                mpfr_swap(zi.get(), ni.get());
            }
            if (mpfr_zero_p(hc_[r].get())) continue;
            mpfr_mul_ui(rh.get(), hh.get(), static_cast<unsigned long>(r), MPFR_RNDN);
            mpfr_set(p.get(), hc_[r].get(), MPFR_RNDN);  // c_r (r h)^k / k!
            const double rhd = static_cast<double>(r) * hd, ac = std::abs(c_[r]);
            const double per = nn + 4 + 2 * K + 4 * static_cast<double>(r);
            double pd = 1;
            for (int k = 0; k <= K; ++k) {
                if (k > 0) {
                    mpfr_mul(p.get(), p.get(), rh.get(), MPFR_RNDN);
                    mpfr_div_ui(p.get(), p.get(), static_cast<unsigned long>(k), MPFR_RNDN);
                    pd *= rhd / k;
                }
                mpfr_mul(term.get(), p.get(), (k & 1) ? zi.get() : zr.get(), MPFR_RNDN);
                if ((k & 3) == 1 || (k & 3) == 2)
                    mpfr_sub(acc[k].get(), acc[k].get(), term.get(), MPFR_RNDN);
                else
                    mpfr_add(acc[k].get(), acc[k].get(), term.get(), MPFR_RNDN);
                wsum[k] += ac * pd * per;
            }
            tail += ac * pd * rhd / (K + 1);
        }
        TaylorModel m;
        m.high = true;
        const double u = std::ldexp(1.0, -static_cast<int>(P) + 2);
        for (int k = 0; k <= K; ++k) {
            m.t.push_back(acc[k].to_double());
            m.err.push_back(1.01 * u * wsum[k] * (1 + 1e-6) + std::abs(m.t.back()) * 0x1p-52 + 1e-300);
        }
        m.tail = tail * (1 + 1e-9) + 1e-300;
        return m;
    }

    PointValue rotate_double(const Mpfr& th) const {
        Mpfr cw(th.prec()), sw(th.prec());
        mpfr_sin_cos(sw.get(), cw.get(), th.get(), MPFR_RNDN);
        const double wr = cw.to_double(), wi = sw.to_double();
        double zr = 1, zi = 0, f = c_[0], df = 0;
        for (std::size_t r = 1; r <= n_; ++r) {
            const double nr = zr * wr - zi * wi;
            const double ni = zr * wi + zi * wr;
            zr = nr;
            zi = ni;
            if (c_[r] == 0) continue;
            f += c_[r] * zr;
            df -= static_cast<double>(r) * c_[r] * zi;
        }
        const double u = 0x1p-53, nn = static_cast<double>(n_);
        PointValue v;
        v.f = f;
        v.df = df;
        v.ef = 1.01 * u * (4 * s1_ + (nn + 4) * s0_) + 1e-300 * (nn + 1);
        v.edf = 1.01 * u * (4 * s2_ + (nn + 4) * s1_) + 1e-300 * (nn + 1);
        return v;
    }

    PointValue rotate_high(const Mpfr& th) const {
        const mpfr_prec_t P = kHighPrecision;
        ensure_high();
        Mpfr wr(P), wi(P), zr(P, 1.0), zi(P, 0.0), nr(P), ni(P), tmp(P), f(P), df(P);
        mpfr_sin_cos(wi.get(), wr.get(), th.get(), MPFR_RNDN);
        mpfr_set(f.get(), hc_[0].get(), MPFR_RNDN);
        for (std::size_t r = 1; r <= n_; ++r) {
            mpfr_mul(nr.get(), zr.get(), wr.get(), MPFR_RNDN);
            mpfr_mul(tmp.get(), zi.get(), wi.get(), MPFR_RNDN);
            mpfr_sub(nr.get(), nr.get(), tmp.get(), MPFR_RNDN);
            mpfr_mul(ni.get(), zr.get(), wi.get(), MPFR_RNDN);
            mpfr_mul(tmp.get(), zi.get(), wr.get(), MPFR_RNDN);
            mpfr_add(ni.get(), ni.get(), tmp.get(), MPFR_RNDN);
            mpfr_swap(zr.get(), nr.get());
            mpfr_swap(zi.get(), ni.get());
            if (mpfr_zero_p(hc_[r].get())) continue;
            mpfr_mul(tmp.get(), hc_[r].get(), zr.get(), MPFR_RNDN);
            mpfr_add(f.get(), f.get(), tmp.get(), MPFR_RNDN);
            mpfr_mul(tmp.get(), hc_[r].get(), zi.get(), MPFR_RNDN);
            mpfr_mul_ui(tmp.get(), tmp.get(), static_cast<unsigned long>(r), MPFR_RNDN);
            mpfr_sub(df.get(), df.get(), tmp.get(), MPFR_RNDN);
        }
        const double u = std::ldexp(1.0, -static_cast<int>(P) + 2), nn = static_cast<double>(n_);
        PointValue v;
        v.high = true;
        v.f = f.to_double();
        v.df = df.to_double();
        v.ef = 1.01 * u * (4 * s1_ + (nn + 4) * s0_) + std::abs(v.f) * 0x1p-52 + 1e-300;
        v.edf = 1.01 * u * (4 * s2_ + (nn + 4) * s1_) + std::abs(v.df) * 0x1p-52 + 1e-300;
        return v;
    }

    void ensure_high() const {
        if (!hc_.empty()) return;
        for (const auto& q : scaled_) {
            Mpfr x(kHighPrecision);
            x.set(q);
            hc_.push_back(std::move(x));
        }
    }

    Rational scale_;
    std::vector<Rational> scaled_;
    std::vector<double> c_;
    mutable std::vector<Mpfr> hc_;
    std::size_t n_ = 0;
    double s0_ = 0, s1_ = 0, s2_ = 0;
};

namespace detail {

inline int first_safe_level(std::size_t n) {
    int e = 1;
    while ((1ULL << (e - 1)) <= n) ++e;
    // start with a spacing of roughly pi / (8n)
    int spacing = 1;
    while ((1ULL << spacing) < 8 * std::max<std::size_t>(n, 1)) ++spacing;
    return std::max(e, spacing);
}

inline bool is_safe_point(const Dyadic& d, int safe_level) {
    return d.num == 0 || (d.exp == 0 && d.num == 1) || d.level() >= safe_level;
}

/// A safe split point strictly inside (a, b).
inline Dyadic split_point(const Dyadic& a, const Dyadic& b, int safe_level) {
    const int E = std::max(a.exp, b.exp);
    unsigned __int128 A = a.num << (E - a.exp), B = b.num << (E - b.exp);
    Dyadic mid = Dyadic::make(A + B, E + 1);
    if (is_safe_point(mid, safe_level)) return mid;
    return Dyadic::make(2 * (A + B) + 1, E + 2);
}

}  // namespace detail

struct IsolationOptions {
    int max_exponent = 118;
    /// Below this cell width (units of pi) the Taylor model is built in MPFR.
    int double_min_exponent = 40;
};

/// Isolates every zero in (0, pi) of t -> sum c_r cos(r t), assuming the
/// algebraic image sum c_r T_r(x) is square-free and nonzero at x = +-1.
/// Throws std::runtime_error if a cell cannot be resolved.
inline std::vector<RootBracket> isolate_zeros(const std::vector<Rational>& coeffs, const IsolationOptions& opt = {}) {
    std::vector<RootBracket> out;
    if (coeffs.size() <= 1) return out;
    CellEvaluator ev(coeffs);
    const std::size_t n = ev.degree();
    const int e0 = detail::first_safe_level(n);
    if (e0 > 60) throw std::invalid_argument("isolate_zeros: degree too large");

    struct Cell {
        Dyadic a, b;
        PointValue va, vb;
        bool high = false;  // Taylor model in MPFR
    };
    auto evaluate = [&](const Dyadic& t) {
        PointValue v = ev.eval(t, false);
        if (v.sign() == 0) v = ev.eval(t, true);
        if (v.sign() == 0) throw std::runtime_error("isolate_zeros: sign unresolved at " + t.to_string());
        return v;
    };

    // initial safe points 0, odd j / 2^e0, 1
    std::vector<Dyadic> pts;
    pts.push_back(Dyadic::make(0, 0));
    for (unsigned __int128 j = 1; j < (static_cast<unsigned __int128>(1) << e0); j += 2) pts.push_back(Dyadic::make(j, e0));
    pts.push_back(Dyadic::make(1, 0));
    std::vector<PointValue> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = evaluate(pts[i]);

    std::vector<Cell> stack;
    for (std::size_t i = pts.size() - 1; i-- > 0;) stack.push_back({pts[i], pts[i + 1], vals[i], vals[i + 1]});

    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        const int width_exp = std::max(c.a.exp, c.b.exp);
        bool high = c.high || width_exp > opt.double_min_exponent;
        TaylorModel tm = ev.taylor(c.a, c.b, high);
        if (!tm.high && !tm.excludes_zero() && !tm.monotone() && tm.noisy()) tm = ev.taylor(c.a, c.b, true);
        if (tm.high) high = true;
        if (tm.excludes_zero()) {
            if (c.va.sign() != c.vb.sign())
                throw std::logic_error("isolate_zeros: zero-free cell with a sign change at " + c.a.to_string());
            continue;
        }
        if (tm.monotone()) {
            if (c.va.sign() != c.vb.sign()) out.push_back({c.a, c.b, c.va.sign()});
            continue;
        }
        if (width_exp >= opt.max_exponent)
            throw std::runtime_error("isolate_zeros: cell could not be resolved near " + c.a.to_string());
        Dyadic s = detail::split_point(c.a, c.b, e0);
        PointValue vs = evaluate(s);
        stack.push_back({s, c.b, vs, c.vb, high});
        stack.push_back({c.a, s, c.va, vs, high});
    }
    std::sort(out.begin(), out.end(), [](const RootBracket& x, const RootBracket& y) { return x.lo < y.lo; });
    return out;
}

/// Shrinks a bracket by sign bisection until its width is below 2^-target_exp.
inline RootBracket refine_bracket(const CellEvaluator& ev, RootBracket br, int target_exp,
                                  const IsolationOptions& opt = {}) {
    const int e0 = detail::first_safe_level(ev.degree());
    while (br.width() > std::ldexp(1.0, -target_exp)) {
        const int e = std::max(br.lo.exp, br.hi.exp);
        if (e >= opt.max_exponent) break;
        Dyadic s = detail::split_point(br.lo, br.hi, e0);
        PointValue v = ev.eval(s, e > opt.double_min_exponent);
        if (v.sign() == 0 && !v.high) v = ev.eval(s, true);
        if (v.sign() == 0) throw std::runtime_error("refine_bracket: sign unresolved at " + s.to_string());
        if (v.sign() == br.sign_lo)
            br.lo = s;
        else
            br.hi = s;
    }
    return br;
}

}  // namespace coszero
