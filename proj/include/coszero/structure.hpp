#pragma once

// From a sparse product Q f to a structured form: periodic coefficient
// blocks plus a small error term, the rational-function rendering of the
// blocks, and the zero-count bounds for such forms.

#include "coszero/kernels.hpp"
#include "coszero/periodic.hpp"
#include "coszero/polynomial.hpp"
#include "coszero/zeros.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

/// log2 of a positive rational, accurate to double precision.
inline double log2_rational(const Rational& q) {
    if (q <= 0) throw std::domain_error("log2_rational: argument must be positive");
    long en = 0, ed = 0;
    const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    return std::log2(mn) - std::log2(md) + static_cast<double>(en - ed);
}

struct CorrelationReport {
    long D = 0;
    bool exact = true;       // support decided by exact arithmetic
    double eps_zero = 0;     // threshold used when not exact
    std::vector<long> support;  // r with (Q f)^(r) != 0, Q = P S_D
    long q_degree = 0;          // max frequency of Q
    // |int P f| / int |P f|; 0/0 when P f vanishes identically
    double integral = 0, abs_integral = 0;
    bool epsilon_defined = false;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    std::string l1_method;  // "closed-form" or "grid"
    std::size_t support_size() const { return support.size(); }
};

namespace detail {

inline void finish_epsilon(CorrelationReport& rep) {
    rep.epsilon_defined = rep.abs_integral > 0;
    rep.epsilon = rep.epsilon_defined ? std::min(1.0, std::abs(rep.integral) / rep.abs_integral)
                                      : std::numeric_limits<double>::quiet_NaN();
}

/// Trapezoid rule for int_0^{2 pi} |g| with g sampled on m points.
template <class G>
double grid_abs_integral(G&& g, long degree) {
    std::size_t m = 4096;
    while (m < 16 * static_cast<std::size_t>(degree + 1)) m *= 2;
    double s = 0;
    for (std::size_t j = 0; j < m; ++j) s += std::abs(g(2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m)));
    return s * 2 * std::numbers::pi / static_cast<double>(m);
}

}  // namespace detail

/// Exact version: P has cyclotomic coefficients, so the support of P S_D f is
/// decided exactly.
inline CorrelationReport correlation_report(const CosinePolynomial& f, const ExponentialPolynomial& P, long D) {
    if (P.is_zero()) throw std::invalid_argument("correlation_report: P must be nonzero");
    if (D < 1) throw std::invalid_argument("correlation_report: D must be at least 1");
    CorrelationReport rep;
    rep.D = D;
    const ExponentialPolynomial fe = ExponentialPolynomial::from_cosine(f);
    const ExponentialPolynomial Q = P * sk(D).exponential();
    rep.q_degree = Q.max_frequency();
    rep.support = (Q * fe).support();
    if (f.is_zero()) return rep;
    // int P f = 2 pi sum_r P^(r) f^(-r)
    std::complex<double> s = 0;
    for (const auto& [r, a] : P.terms()) s += a.to_complex() * fe.coefficient(-r).to_complex();
    rep.integral = 2 * std::numbers::pi * std::abs(s);
    const ExponentialPolynomial Pf = P * fe;
    bool cosine = Pf.is_rational();
    if (cosine)
        for (const auto& [r, a] : Pf.terms())
            if (!(Pf.coefficient(-r) == a)) cosine = false;
    if (Pf.is_zero()) {
        rep.abs_integral = 0;
    } else if (cosine) {
        rep.abs_integral = l1_norm_exact(Pf.to_cosine()).mid();
        rep.l1_method = "closed-form";
    } else {
        const long deg = std::max(std::abs(Pf.min_frequency()), std::abs(Pf.max_frequency()));
        rep.abs_integral = detail::grid_abs_integral([&](double t) { return std::abs(Pf.eval(t)); }, deg);
        rep.l1_method = "grid";
    }
    detail::finish_epsilon(rep);
    return rep;
}

/// Floating version for a companion polynomial: coefficients of P S_D f are
/// nonzero when they exceed eps_zero, by default 2^-30 times the bound
/// sum |Q^| * max |f^| on their size.
inline CorrelationReport correlation_report(const CosinePolynomial& f, const CompanionPolynomial& P, long D,
                                            std::optional<double> eps_zero = std::nullopt) {
    if (P.cheb.empty()) throw std::invalid_argument("correlation_report: P must be nonzero");
    if (D < 1) throw std::invalid_argument("correlation_report: D must be at least 1");
    CorrelationReport rep;
    rep.D = D;
    rep.exact = false;
    const auto Pe = P.exponential();
    const auto S = sk(D).coefficients;
    std::map<long, double> Q;
    for (const auto& [r, a] : Pe)
        for (std::size_t j = 0; j < S.size(); ++j)
            if (S[j] != 0) Q[r + static_cast<long>(j)] += a * S[j].get_d();
    rep.q_degree = Q.empty() ? 0 : Q.rbegin()->first;
    std::map<long, double> fe;
    double fmax = 0;
    for (std::size_t r = 0; r < f.coeffs().size(); ++r) {
        const double c = f.coeffs()[r].get_d();
        if (c == 0) continue;
        fmax = std::max(fmax, std::abs(r == 0 ? c : c / 2));
        if (r == 0) {
            fe[0] = c;
        } else {
            fe[static_cast<long>(r)] = c / 2;
            fe[-static_cast<long>(r)] = c / 2;
        }
    }
    double qsum = 0;
    for (const auto& [r, a] : Q) qsum += std::abs(a);
    rep.eps_zero = eps_zero ? *eps_zero : std::ldexp(qsum * fmax, -30);
    std::map<long, double> prod;
    for (const auto& [r, a] : Q)
        for (const auto& [s, b] : fe) prod[r + s] += a * b;
    for (const auto& [r, v] : prod)
        if (std::abs(v) > rep.eps_zero) rep.support.push_back(r);
    if (f.is_zero()) return rep;
    double s = 0;
    for (const auto& [r, a] : Pe) {
        auto it = fe.find(-r);
        if (it != fe.end()) s += a * it->second;
    }
    rep.integral = 2 * std::numbers::pi * std::abs(s);
    rep.abs_integral = detail::grid_abs_integral([&](double t) { return P.eval(t) * static_cast<double>(clenshaw(f, t)); },
                                                 f.degree() + P.k());
    rep.l1_method = "grid";
    detail::finish_epsilon(rep);
    return rep;
}

struct StructuredBlock {
    long lo = 0, hi = -1;         // I_i, inclusive
    CosinePolynomial poly;        // f_i = sum_{r in I_i} C_r cos(r t)
    long period = 1;              // minimal period of (f^(r))_{r in I_i}
    std::vector<long> component_periods;  // from the periodic decomposition of the gap
    long window_rank = 0;         // rank t of the (d+1)-windows on the gap
    double component_period_bound = 0;  // 16 t log2 log2 (t + 3)
    std::string certification;    // of the underlying decomposition
    /// f^(lo), ..., f^(lo + period - 1).
    RationalVector pattern;
};

struct StructuredForm {
    std::vector<StructuredBlock> blocks;
    CosinePolynomial error_term;
    std::vector<long> exceptional_set;  // S
    Rational error_sup_bound = 0;       // sum over S of |C_r|
    Rational coefficient_bound = 0;     // M(R) over observed coefficients
    Rational f0 = 0;                    // f(0)
    long d = 0;
    long threshold = 0;
    long default_threshold = 0;  // |R|^d + 3d, saturated at LONG_MAX
    long support_size = 0;     // K = |B intersect [0, inf)|
    std::string status;        // "certified" or "heuristic structure"
    std::string warning;
};

namespace detail {

inline long saturating_threshold(std::size_t R, long d) {
    Integer t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(R), static_cast<unsigned long>(d));
    t += 3 * d;
    return t.fits_slong_p() ? t.get_si() : std::numeric_limits<long>::max();
}

inline Rational hat(const CosinePolynomial& f, long r) {
    r = std::abs(r);
    const Rational c = f.coeff(static_cast<std::size_t>(r));
    return r == 0 ? c : Rational(c / 2);
}

inline long minimal_period(const RationalVector& x, long lo, long hi, long max_p) {
    for (long p = 1; p <= max_p; ++p) {
        if (max_p % p != 0) continue;
        bool ok = true;
        for (long r = lo; r + p <= hi && ok; ++r)
            ok = x[static_cast<std::size_t>(r)] == x[static_cast<std::size_t>(r + p)];
        if (ok) return p;
    }
    return 0;
}

}  // namespace detail

/// Splits f along the gaps of B (the nonzero coefficients of Q f, only r >= 0
/// matter): gaps longer than the threshold, trimmed by d at both ends, become
/// periodic blocks; everything else forms the error term E.
inline StructuredForm reduce_to_structure(const CosinePolynomial& f, const std::set<long>& B, long d,
                                          std::optional<long> length_threshold = std::nullopt) {
    if (d < 1) throw std::invalid_argument("reduce_to_structure: d must be at least 1");
    StructuredForm out;
    out.d = d;
    out.f0 = f.value_at_zero();
    const auto R = f.observed_values();
    out.coefficient_bound = coefficient_stats(R).M;
    out.default_threshold = detail::saturating_threshold(R.size(), d);
    out.threshold = length_threshold ? *length_threshold : out.default_threshold;
    out.status = "certified";
    if (out.threshold < out.default_threshold) {
        out.status = "heuristic structure";
        out.warning = "gap threshold " + std::to_string(out.threshold) + " below |R|^d + 3d = " + std::to_string(out.default_threshold);
    }
    for (long b : B)
        if (b >= 0) ++out.support_size;
    const long n = f.degree();
    std::vector<bool> in_block(static_cast<std::size_t>(std::max(n + 1, 0L)), false);
    long r = 0;
    while (r <= n) {
        if (B.count(r)) {
            ++r;
            continue;
        }
        long e = r;
        while (e + 1 <= n && !B.count(e + 1)) ++e;
        const bool unbounded = e == n && !B.count(n + 1);
        const long len = e - r + 1;
        if (!unbounded && len > out.threshold && len > 2 * d) {
            StructuredBlock blk;
            blk.lo = r + d;
            blk.hi = e - d;
            RationalVector gap;
            for (long s = r; s <= e; ++s) gap.push_back(detail::hat(f, s));
            const std::string name = "block [" + std::to_string(blk.lo) + ", " + std::to_string(blk.hi) + "]";
            ExpressOptions opt;
            opt.allow_short = true;
            PeriodicDecomposition dec;
            try {
                dec = periodic_decompose(gap, static_cast<std::size_t>(d + 1), opt);
            } catch (const std::exception& ex) {
                throw std::domain_error("reduce_to_structure: periodicity certification failed for " + name + ": " + ex.what());
            }
            long common = 1;
            for (const auto& c : dec.components) {
                blk.component_periods.push_back(c.period);
                common = lcm_long(common, c.period);
            }
            blk.window_rank = dec.rank;
            blk.component_period_bound = dec.period_bound;
            blk.certification = dec.certification;
            const long p = detail::minimal_period(gap, d, len - 1 - d, common);
            if (p == 0) throw std::domain_error("reduce_to_structure: " + name + " is not periodic with the certified period");
            blk.period = p;
            std::vector<Rational> c(static_cast<std::size_t>(blk.hi + 1), Rational(0));
            for (long s = blk.lo; s <= blk.hi; ++s) {
                c[static_cast<std::size_t>(s)] = f.coeff(static_cast<std::size_t>(s));
                in_block[static_cast<std::size_t>(s)] = true;
            }
            for (long s = 0; s < p; ++s) blk.pattern.push_back(gap[static_cast<std::size_t>(d + s)]);
            blk.poly = CosinePolynomial(std::move(c));
            out.blocks.push_back(std::move(blk));
        }
        r = e + 1;
    }
    std::vector<Rational> ec(static_cast<std::size_t>(std::max(n + 1, 0L)), Rational(0));
    for (long s = 0; s <= n; ++s) {
        if (in_block[static_cast<std::size_t>(s)]) continue;
        out.exceptional_set.push_back(s);
        ec[static_cast<std::size_t>(s)] = f.coeff(static_cast<std::size_t>(s));
        out.error_sup_bound += abs_value(ec[static_cast<std::size_t>(s)]);
    }
    out.error_term = CosinePolynomial(std::move(ec));
    CosinePolynomial sum = out.error_term;
    for (const auto& b : out.blocks) sum = sum + b.poly;
    if (!(sum == f)) throw std::logic_error("reduce_to_structure: blocks and error do not reassemble f");
    if (out.status == "certified" && out.support_size > 0) {
        // |S| <= 1 + K + 2dK + K(|R|^d + 3d) <= 8K(|R|^d + d)
        Integer cap;
        mpz_ui_pow_ui(cap.get_mpz_t(), static_cast<unsigned long>(R.size()), static_cast<unsigned long>(d));
        cap = 8 * out.support_size * (cap + d);
        if (Integer(static_cast<long>(out.exceptional_set.size())) > cap)
            throw std::logic_error("reduce_to_structure: exceptional set exceeds 8K(|R|^d + d)");
    }
    return out;
}

/// One block as Q(t) (e^{iNt} - e^{iMt}) / (1 - e^{i p t}) with Q of degree
/// p - 1, covering frequencies [N, M) on the positive side, plus explicit
/// remainder terms when the block length is not a multiple of the period.
struct RationalFunctionTerm {
    RationalVector q;  // Q(t) = sum_a q[a] e^{i a t}
    long N = 0, M = 0, p = 1;
    std::map<long, Rational> remainder;
    bool partial_period = false;  // block shorter than one period
};

/// Positive-frequency coefficients r -> f^(r) represented by the term.
inline std::map<long, Rational> expand(const RationalFunctionTerm& t) {
    std::map<long, Rational> out;
    for (long s = t.N; s < t.M; s += t.p)
        for (long a = 0; a < t.p; ++a)
            if (t.q[static_cast<std::size_t>(a)] != 0) out[s + a] = t.q[static_cast<std::size_t>(a)];
    for (const auto& [r, v] : t.remainder) out[r] = v;
    return out;
}

inline std::vector<RationalFunctionTerm> to_rational_function_form(const StructuredForm& s) {
    std::vector<RationalFunctionTerm> out;
    for (const auto& b : s.blocks) {
        RationalFunctionTerm t;
        t.p = b.period;
        t.q = b.pattern;
        const long len = b.hi - b.lo + 1;
        t.N = b.lo;
        t.M = b.lo + (len / t.p) * t.p;
        t.partial_period = len < t.p;
        for (long r = t.M; r <= b.hi; ++r) {
            const Rational v = detail::hat(b.poly, r);
            if (v != 0) t.remainder[r] = v;
        }
        std::map<long, Rational> want;
        for (long r = b.lo; r <= b.hi; ++r) {
            const Rational v = detail::hat(b.poly, r);
            if (v != 0) want[r] = v;
        }
        if (expand(t) != want) throw std::logic_error("to_rational_function_form: round trip failed");
        out.push_back(std::move(t));
    }
    return out;
}

struct BoundResult {
    bool applicable = false;
    double value = 0;
    std::string note;
};

/// log2(Z) / (240 P (20 l M + pi |E|)) - 1 with Z = (|f(0)| - |E|) / M.
inline BoundResult sums_of_D_bound(long l, const Rational& M, long P, const Rational& E_sup, const Rational& f0) {
    if (l < 0 || P < 1 || M <= 0 || E_sup < 0) throw std::invalid_argument("sums_of_D_bound: need l >= 0, P >= 1, M > 0, |E| >= 0");
    BoundResult res;
    const Rational Z = (abs_value(f0) - E_sup) / M;
    if (Z <= 0) {
        res.note = "inapplicable: Z <= 0";
        return res;
    }
    res.applicable = true;
    res.value = log2_rational(Z) /
                    (240.0 * static_cast<double>(P) * (20.0 * static_cast<double>(l) * M.get_d() + std::numbers::pi * E_sup.get_d())) -
                1;
    return res;
}

struct StructuredBoundOptions {
    /// Use Y = |f(0)| - 8 P^2 l + K / M as stated in the zero-count result
    /// instead of Z = (|f(0)| - K - 8 P^2 M l) / M from its proof.
    bool statement_y = false;
    /// Grid size for checking |E| <= K when sum |C_r| over E exceeds K.
    std::size_t grid = 1 << 16;
};

struct StructuredBound {
    BoundResult bound;
    Rational y;                  // the quantity whose log is taken
    std::vector<Rational> A;     // A_i = (2 / p_i) * sum over one period of f_i^
    long l = 0;
    std::string error_check;     // "coefficient sum" or "grid"
};

/// log2(Y) / (2^14 P^3 M l + 2^10 K P) - P^2 - 1 after checking the
/// hypotheses: 2 f_i^ integral, |f_i^| <= M, |E| <= K, periods <= P.
inline StructuredBound structured_zero_bound(const StructuredForm& s, const Rational& M, long P, const Rational& K,
                                             const StructuredBoundOptions& opt = {}) {
    if (M <= 0 || P < 1 || K < 0) throw std::invalid_argument("structured_zero_bound: need M > 0, P >= 1, K >= 0");
    StructuredBound out;
    out.l = static_cast<long>(s.blocks.size());
    for (const auto& b : s.blocks) {
        const std::string name = "block [" + std::to_string(b.lo) + ", " + std::to_string(b.hi) + "]";
        if (b.period > P) throw std::domain_error("structured_zero_bound: period of " + name + " exceeds P");
        for (long r = b.lo; r <= b.hi; ++r) {
            const Rational h = detail::hat(b.poly, r);
            if (Rational(2 * h).get_den() != 1) throw std::domain_error("structured_zero_bound: 2 f^ is not an integer in " + name);
            if (abs_value(h) > M) throw std::domain_error("structured_zero_bound: |f^| exceeds M in " + name);
        }
        Rational a = 0;
        for (const auto& v : b.pattern) a += v;
        a *= Rational(2, b.period);
        a.canonicalize();
        out.A.push_back(a);
    }
    if (s.error_sup_bound <= K) {
        out.error_check = "coefficient sum";
    } else {
        double mx = 0;
        for (std::size_t j = 0; j < opt.grid; ++j)
            mx = std::max(mx, std::abs(static_cast<double>(
                                  clenshaw(s.error_term, 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(opt.grid)))));
        if (mx > K.get_d()) throw std::domain_error("structured_zero_bound: |E| exceeds K");
        out.error_check = "grid";
    }
    const Rational PP(P), L(out.l);
    if (opt.statement_y)
        out.y = abs_value(s.f0) - 8 * PP * PP * L + K / M;
    else
        out.y = (abs_value(s.f0) - K - 8 * PP * PP * M * L) / M;
    if (out.y <= 0) {
        out.bound.note = "inapplicable: Y <= 0";
        return out;
    }
    const double p = static_cast<double>(P), l = static_cast<double>(out.l);
    const double den = 16384.0 * p * p * p * M.get_d() * l + 1024.0 * K.get_d() * p;
    if (den == 0) {
        out.bound.note = "inapplicable: no blocks and K = 0";
        return out;
    }
    out.bound.applicable = true;
    out.bound.value = log2_rational(out.y) / den - p * p - 1;
    return out;
}

}  // namespace coszero
