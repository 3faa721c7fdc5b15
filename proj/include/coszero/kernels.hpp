#pragma once

// The three special polynomials: S_k = prod_{r<=k} (1 - z^r), the Dirichlet
// sums D_n = sum_{r<=n} cos(r t), and the averaging product
// F_P = prod_{t<=P} (1/t) sum_{r<t} cos(r t). Plus the verifiers built on
// them: interval integrals, the S_k killing property and its squared form.

#include "coszero/enclosure.hpp"
#include "coszero/mpfr.hpp"
#include "coszero/polynomial.hpp"
#include "coszero/rng.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

enum class KernelKind { Sk, Dn, Averaging };

inline std::string to_string(KernelKind k) {
    switch (k) {
        case KernelKind::Sk: return "S_k";
        case KernelKind::Dn: return "D_n";
        default: return "F";
    }
}

struct KernelPoly {
    KernelKind kind = KernelKind::Sk;
    long parameter = 0;
    /// Sk: coefficients of z^j; Dn and Averaging: cosine coefficients.
    std::vector<Rational> coefficients;
    /// sup over the circle of |kernel|, as an upper bound.
    Rational sup_norm_bound = 0;

    long degree() const { return static_cast<long>(coefficients.size()) - 1; }

    ExponentialPolynomial exponential() const {
        if (kind != KernelKind::Sk) return ExponentialPolynomial::from_cosine(cosine());
        std::map<long, Rational> m;
        for (std::size_t j = 0; j < coefficients.size(); ++j)
            if (coefficients[j] != 0) m[static_cast<long>(j)] = coefficients[j];
        return ExponentialPolynomial(m);
    }
    CosinePolynomial cosine() const {
        if (kind == KernelKind::Sk) throw std::domain_error("S_k is not a cosine polynomial");
        return CosinePolynomial(coefficients);
    }
};

inline KernelPoly sk(long k) {
    if (k < 1) throw std::invalid_argument("sk: k must be at least 1");
    std::vector<Integer> c{Integer(1)};
    for (long r = 1; r <= k; ++r) {
        std::vector<Integer> next(c.size() + static_cast<std::size_t>(r), Integer(0));
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j] += c[j];
            next[j + static_cast<std::size_t>(r)] -= c[j];
        }
        c = std::move(next);
    }
    KernelPoly out;
    out.kind = KernelKind::Sk;
    out.parameter = k;
    for (const auto& x : c) out.coefficients.emplace_back(x);
    Integer two_k;
    mpz_ui_pow_ui(two_k.get_mpz_t(), 2, static_cast<unsigned long>(k));
    out.sup_norm_bound = Rational(two_k);
    return out;
}

inline long sk_degree(long k) { return k * (k + 1) / 2; }

inline KernelPoly dirichlet_kernel(long n) {
    if (n < 0) throw std::invalid_argument("dirichlet_kernel: n must be non-negative");
    KernelPoly out;
    out.kind = KernelKind::Dn;
    out.parameter = n;
    out.coefficients.assign(static_cast<std::size_t>(n + 1), Rational(1));
    out.sup_norm_bound = Rational(n + 1);
    return out;
}

/// prod_{t=1}^P (1/t) sum_{r=0}^{t-1} cos(r theta); each factor has sup norm 1.
inline KernelPoly averaging_poly(long P) {
    if (P < 1) throw std::invalid_argument("averaging_poly: P must be at least 1");
    CosinePolynomial F({Rational(1)});
    for (long t = 2; t <= P; ++t) {
        std::vector<Rational> h(static_cast<std::size_t>(t), Rational(1, t));
        for (auto& x : h) x.canonicalize();
        F = F * CosinePolynomial(h);
    }
    KernelPoly out;
    out.kind = KernelKind::Averaging;
    out.parameter = P;
    out.coefficients = F.coeffs();
    out.sup_norm_bound = Rational(1);
    return out;
}

namespace detail {

// C_0 (B - A) + sum_{r>=1} C_r (sin(rB) - sin(rA)) / r for MPFR angles known
// to within angle_err; returns an enclosure.
inline Enclosure interval_integral(const CosinePolynomial& f, const Mpfr& A, const Mpfr& B, double angle_err,
                                   mpfr_prec_t P) {
    const auto& c = f.coeffs();
    if (c.empty()) return {0, 0};
    Mpfr acc(P), term(P), sb(P), sa(P), ang(P + 32), coef(P);
    mpfr_sub(term.get(), B.get(), A.get(), MPFR_RNDN);
    coef.set(c[0]);
    mpfr_mul(acc.get(), coef.get(), term.get(), MPFR_RNDN);
    double abs_sum = std::abs(c[0].get_d()), harmonic = 0;
    for (std::size_t r = 1; r < c.size(); ++r) {
        if (c[r] == 0) continue;
        mpfr_mul_ui(ang.get(), B.get(), static_cast<unsigned long>(r), MPFR_RNDN);
        mpfr_sin(sb.get(), ang.get(), MPFR_RNDN);
        mpfr_mul_ui(ang.get(), A.get(), static_cast<unsigned long>(r), MPFR_RNDN);
        mpfr_sin(sa.get(), ang.get(), MPFR_RNDN);
        mpfr_sub(term.get(), sb.get(), sa.get(), MPFR_RNDN);
        coef.set(c[r] / static_cast<long>(r));
        mpfr_mul(term.get(), term.get(), coef.get(), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
        abs_sum += std::abs(c[r].get_d());
        harmonic += std::abs(c[r].get_d()) / static_cast<double>(r);
    }
    const double n = static_cast<double>(c.size());
    const double magnitude = std::abs(c[0].get_d()) * 2 * std::numbers::pi + 2 * harmonic;
    const double err = std::ldexp(1.0, -static_cast<int>(P) + 4) * (abs_sum * (2 + 4 * std::numbers::pi) + n * magnitude) +
                       2 * angle_err * abs_sum * (1 + 1e-12);
    const double v = acc.to_double();
    return {std::nextafter(v - err, -INFINITY), std::nextafter(v + err, INFINITY)};
}

}  // namespace detail

/// Integral of f over [a, b] (radians, taken as exact doubles) from the
/// closed-form antiderivative.
inline Enclosure integral_over_interval(const CosinePolynomial& f, double a, double b, mpfr_prec_t prec = 128) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("integral_over_interval: non-finite endpoint");
    if (a > b) throw std::invalid_argument("integral_over_interval: a > b");
    Mpfr A(prec + 64), B(prec + 64);
    mpfr_set_d(A.get(), a, MPFR_RNDN);
    mpfr_set_d(B.get(), b, MPFR_RNDN);
    return detail::interval_integral(f, A, B, 0.0, prec);
}

/// Same, with endpoints a = pi * qa, b = pi * qb.
inline Enclosure integral_over_interval_pi(const CosinePolynomial& f, const Rational& qa, const Rational& qb,
                                           mpfr_prec_t prec = 128) {
    if (qa > qb) throw std::invalid_argument("integral_over_interval: a > b");
    Mpfr A(prec + 64), B(prec + 64);
    set_pi_dyadic(A, qa.get_num(), 0);
    mpfr_div_z(A.get(), A.get(), qa.get_den_mpz_t(), MPFR_RNDN);
    set_pi_dyadic(B, qb.get_num(), 0);
    mpfr_div_z(B.get(), B.get(), qb.get_den_mpz_t(), MPFR_RNDN);
    const double angle_err = std::ldexp(std::max(std::abs(qa.get_d()), std::abs(qb.get_d())) * 4 + 4, -static_cast<int>(prec) - 60);
    return detail::interval_integral(f, A, B, angle_err, prec);
}

/// Enclosures of the integral of D_n over [a, b] for every n = 0..n_max, in
/// one pass over the running sum b - a + sum_{r<=n} (sin rb - sin ra) / r.
inline std::vector<Enclosure> dirichlet_prefix_integrals(double a, double b, long n_max, mpfr_prec_t prec = 80) {
    if (a > b) throw std::invalid_argument("dirichlet_prefix_integrals: a > b");
    std::vector<Enclosure> out;
    out.reserve(static_cast<std::size_t>(n_max + 1));
    Mpfr acc(prec), sb(prec), sa(prec), ang(prec + 64), A(64), B(64);
    mpfr_set_d(A.get(), a, MPFR_RNDN);
    mpfr_set_d(B.get(), b, MPFR_RNDN);
    mpfr_sub(acc.get(), B.get(), A.get(), MPFR_RNDN);
    const double u = std::ldexp(1.0, -static_cast<int>(prec));
    double err = u * 8, v = acc.to_double();
    out.push_back({std::nextafter(v - err, -INFINITY), std::nextafter(v + err, INFINITY)});
    for (long r = 1; r <= n_max; ++r) {
        mpfr_mul_ui(ang.get(), B.get(), static_cast<unsigned long>(r), MPFR_RNDN);
        mpfr_sin(sb.get(), ang.get(), MPFR_RNDN);
        mpfr_mul_ui(ang.get(), A.get(), static_cast<unsigned long>(r), MPFR_RNDN);
        mpfr_sin(sa.get(), ang.get(), MPFR_RNDN);
        mpfr_sub(sb.get(), sb.get(), sa.get(), MPFR_RNDN);
        mpfr_div_ui(sb.get(), sb.get(), static_cast<unsigned long>(r), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), sb.get(), MPFR_RNDN);
        v = acc.to_double();
        // two sines, a subtraction, a division and an addition, each within half an ulp
        err += u * (6.0 / static_cast<double>(r) + 2 * std::abs(v) + 8);
        out.push_back({std::nextafter(v - err - std::abs(v) * 0x1p-52, -INFINITY),
                       std::nextafter(v + err + std::abs(v) * 0x1p-52, INFINITY)});
    }
    return out;
}

struct DirichletReport {
    long n_max = 0;
    long trials = 0;
    double bound = 10;
    long pairs_checked = 0;
    double max_abs_upper = 0;  // max over (n, J) of the enclosure's |.| upper end
    long worst_n = 0;
    double worst_a = 0, worst_b = 0;
    bool holds = true;
};

/// |integral_J D_n| <= bound for all n <= n_max and `trials` random intervals
/// J = [a, b] in [0, 2 pi]; each interval is checked at every n.
inline DirichletReport verify_dirichlet(long n_max, long trials, std::uint64_t seed, double bound = 10) {
    if (n_max < 0 || trials < 0) throw std::invalid_argument("verify_dirichlet: negative size");
    DirichletReport rep;
    rep.n_max = n_max;
    rep.trials = trials;
    rep.bound = bound;
    for (long t = 0; t < trials; ++t) {
        auto rng = stream_rng(seed, static_cast<std::uint64_t>(t));
        std::uniform_real_distribution<double> U(0.0, 2 * std::numbers::pi);
        double a = U(rng), b = U(rng);
        if (a > b) std::swap(a, b);
        auto encs = dirichlet_prefix_integrals(a, b, n_max);
        for (long n = 0; n <= n_max; ++n) {
            const double m = encs[static_cast<std::size_t>(n)].magnitude();
            ++rep.pairs_checked;
            if (m > rep.max_abs_upper) {
                rep.max_abs_upper = m;
                rep.worst_n = n;
                rep.worst_a = a;
                rep.worst_b = b;
            }
        }
    }
    rep.holds = rep.max_abs_upper <= bound;
    return rep;
}

struct PeriodCheck {
    std::optional<long> period;  // smallest p <= k with f(r + p) = f(r) on the window
    long break_index = 0;        // otherwise: the latest index at which some p <= k first fails
    long break_period = 0;
};

/// Smallest period p <= k of r -> f(r) on [N, M].
inline PeriodCheck find_period(const ExponentialPolynomial& f, long k, long N, long M) {
    PeriodCheck pc;
    long best = N - 1;
    for (long p = 1; p <= k; ++p) {
        long bad = M + 1;
        for (long r = N + p; r <= M; ++r)
            if (!(f.coefficient(r) == f.coefficient(r - p))) {
                bad = r;
                break;
            }
        if (bad > M) {
            pc.period = p;
            return pc;
        }
        if (bad > best) {
            best = bad;
            pc.break_period = p;
        }
    }
    pc.break_index = best;
    return pc;
}

struct KillingReport {
    long k = 0, deg_sk = 0;
    long period = 0;
    long window_lo = 0, window_hi = 0;  // [N + deg S_k, M]
    bool window_empty = false;
    bool verified = false;
    std::optional<long> first_nonzero;
};

struct KillingOptions {
    /// Perturb the product at the first checked index before checking; the
    /// check must then report a failure.
    bool inject_fault = false;
};

/// Checks that S_k * f has zero coefficients on [N + deg S_k, M] when f's
/// coefficients on [N, M] have a period p <= k.
inline KillingReport killing_check(const ExponentialPolynomial& f, long k, long N, long M,
                                   const KillingOptions& opt = {}) {
    if (N > M) throw std::invalid_argument("killing_check: N > M");
    auto pc = find_period(f, k, N, M);
    if (!pc.period)
        throw std::invalid_argument("killing_check: coefficients on [" + std::to_string(N) + ", " + std::to_string(M) +
                                    "] have no period <= " + std::to_string(k) + "; first violating index " +
                                    std::to_string(pc.break_index) + " (period " + std::to_string(pc.break_period) + ")");
    KillingReport rep;
    rep.k = k;
    rep.deg_sk = sk_degree(k);
    rep.period = *pc.period;
    rep.window_lo = N + rep.deg_sk;
    rep.window_hi = M;
    rep.window_empty = rep.window_lo > rep.window_hi;
    ExponentialPolynomial g = sk(k).exponential() * f;
    if (opt.inject_fault && !rep.window_empty) g.set(rep.window_lo, g.coefficient(rep.window_lo) + CycElement(g.field(), Rational(1)));
    for (long r = rep.window_lo; r <= rep.window_hi; ++r)
        if (!g.coefficient(r).is_zero()) {
            rep.first_nonzero = r;
            break;
        }
    rep.verified = !rep.first_nonzero.has_value();
    if (!rep.verified && !opt.inject_fault)
        throw std::logic_error("killing_check: S_k f is nonzero at " + std::to_string(*rep.first_nonzero) +
                               " inside the periodic window");
    return rep;
}

struct IdempotenceReport {
    long k = 0, deg_sk = 0;
    std::size_t value_count = 0;     // |R|
    bool size_hypothesis = false;    // M - N > |R|^(2 deg) + 6 deg
    std::string warning;
    bool hypothesis_holds = false;   // S_k^2 f = 0 on [N + 2 deg, M]
    std::optional<long> counterexample;
    long conclusion_lo = 0, conclusion_hi = 0;  // [N + 3 deg, M - 2 deg]
    bool conclusion_verified = false;
    std::optional<long> conclusion_failure;
    std::string status;  // "verified", "hypothesis fails", or "implication fails"
};

/// If S_k^2 f vanishes on the indices determined by f on [N, M], checks that
/// S_k f vanishes on [N + 3 deg S_k, M - 2 deg S_k]. R defaults to the values
/// f takes on [N, M].
inline IdempotenceReport idempotence_check(const ExponentialPolynomial& f, long k, long N, long M,
                                           std::optional<std::size_t> value_count = std::nullopt) {
    if (N > M) throw std::invalid_argument("idempotence_check: N > M");
    IdempotenceReport rep;
    rep.k = k;
    rep.deg_sk = sk_degree(k);
    if (value_count) {
        rep.value_count = *value_count;
    } else {
        std::vector<CycElement> seen;
        for (long r = N; r <= M; ++r) {
            CycElement v = f.coefficient(r);
            bool found = false;
            for (const auto& s : seen)
                if (s == v) {
                    found = true;
                    break;
                }
            if (!found) seen.push_back(v);
        }
        rep.value_count = seen.size();
    }
    Integer need;
    mpz_ui_pow_ui(need.get_mpz_t(), static_cast<unsigned long>(rep.value_count), static_cast<unsigned long>(2 * rep.deg_sk));
    need += 6 * rep.deg_sk;
    rep.size_hypothesis = Integer(M - N) > need;
    if (!rep.size_hypothesis)
        rep.warning = "outside lemma hypothesis: M - N = " + std::to_string(M - N) + " <= |R|^(2 deg S_k) + 6 deg S_k = " +
                      need.get_str();
    const ExponentialPolynomial s = sk(k).exponential();
    const ExponentialPolynomial g1 = s * f, g2 = s * g1;
    const long d = rep.deg_sk;
    for (long r = N + 2 * d; r <= M; ++r)
        if (!g2.coefficient(r).is_zero()) {
            rep.counterexample = r;
            break;
        }
    rep.hypothesis_holds = !rep.counterexample;
    rep.conclusion_lo = N + 3 * d;
    rep.conclusion_hi = M - 2 * d;
    if (!rep.hypothesis_holds) {
        rep.status = "hypothesis fails";
        return rep;
    }
    for (long r = rep.conclusion_lo; r <= rep.conclusion_hi; ++r)
        if (!g1.coefficient(r).is_zero()) {
            rep.conclusion_failure = r;
            break;
        }
    rep.conclusion_verified = !rep.conclusion_failure;
    rep.status = rep.conclusion_verified ? "verified" : "implication fails";
    return rep;
}

}  // namespace coszero
