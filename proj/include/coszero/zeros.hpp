#pragma once

// Counting distinct zeros and sign changes of cosine polynomials on
// [0, 2 pi), the companion polynomial that tracks sign changes, and the
// exact L1 norm assembled from certified zeros.

#include "coszero/chebyshev.hpp"
#include "coszero/enclosure.hpp"
#include "coszero/evaluation.hpp"
#include "coszero/modular.hpp"
#include "coszero/mpfr.hpp"
#include "coszero/polynomial.hpp"
#include "coszero/roots.hpp"
#include "coszero/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

enum class ZeroMethod { ExactSturm, ExactValidated, GridBisection };

inline std::string to_string(ZeroMethod m) {
    switch (m) {
        case ZeroMethod::ExactSturm: return "exact-sturm";
        case ZeroMethod::ExactValidated: return "exact-validated";
        case ZeroMethod::GridBisection: return "grid-bisection";
    }
    return "unknown";
}

/// Degrees up to this use Sturm sequences for the interior count; above it
/// the count comes from validated cell isolation alone.
inline constexpr long kSturmMaxDegree = 300;

/// One square-free factor of the algebraic image (Chebyshev coefficients)
/// with its multiplicity and isolated interior roots.
struct ZeroFactor {
    std::vector<Rational> cheb;
    int multiplicity = 1;
    std::vector<RootBracket> roots;
};

struct ZeroCertificate {
    long distinct_zero_count = 0;
    /// Brackets in units of pi, inside (0, 1), one per sign change.
    std::vector<RootBracket> sign_change_points;
    ZeroMethod method = ZeroMethod::ExactSturm;
    int multiplicity_at_zero = 0;  // of the root x = 1 of the algebraic image
    int multiplicity_at_pi = 0;    // of the root x = -1
    /// Sign of f just to the right of t = 0.
    int sign_near_zero = 0;
    std::vector<ZeroFactor> factors;

    long sign_changes() const { return static_cast<long>(sign_change_points.size()); }
    long interior_zero_count() const {
        long s = 0;
        for (const auto& f : factors) s += static_cast<long>(f.roots.size());
        return s;
    }
    bool exact() const { return method != ZeroMethod::GridBisection; }
};

namespace detail {

inline std::vector<Integer> integer_chebyshev(const std::vector<Rational>& c) {
    Integer den = common_denominator(c);
    std::vector<Integer> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        Rational s = c[i] * den;
        out[i] = s.get_num();
    }
    return out;
}

/// Square-free certificate computed on modular images of the Chebyshev form.
inline bool chebyshev_squarefree(const std::vector<Rational>& c) {
    if (c.size() <= 2) return true;
    auto ci = integer_chebyshev(c);
    const long n = static_cast<long>(c.size()) - 1;
    for (std::size_t i = 0, used = 0; used < 3 && i < 64; ++i) {
        const std::uint64_t p = modp::large_prime(i);
        ModPoly g = cheb_to_monomial_mod(ci, p);
        if (static_cast<long>(g.size()) - 1 != n) continue;
        ++used;
        if (modp::gcd(g, modp::derivative(g, p), p).size() == 1) return true;
    }
    return false;
}

}  // namespace detail

/// Exact count of distinct zeros in [0, 2 pi) and isolation of sign changes.
namespace detail {

// Roots of coprime factors are distinct, so overlapping brackets from
// different factors can always be refined apart.
inline void separate_brackets(std::vector<ZeroFactor>& factors) {
    if (factors.size() < 2) return;
    std::vector<std::unique_ptr<CellEvaluator>> evs;
    for (const auto& f : factors) evs.push_back(std::make_unique<CellEvaluator>(f.cheb));
    for (;;) {
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t i = 0; i < factors.size(); ++i)
            for (std::size_t j = 0; j < factors[i].roots.size(); ++j) all.push_back({i, j});
        std::sort(all.begin(), all.end(), [&](const auto& x, const auto& y) {
            return factors[x.first].roots[x.second].lo < factors[y.first].roots[y.second].lo;
        });
        bool clean = true;
        for (std::size_t k = 0; k + 1 < all.size(); ++k) {
            auto& a = factors[all[k].first].roots[all[k].second];
            auto& b = factors[all[k + 1].first].roots[all[k + 1].second];
            if (b.lo < a.hi) {
                clean = false;
                for (auto [fi, ri] : {all[k], all[k + 1]}) {
                    auto& br = factors[fi].roots[ri];
                    const int e = std::max(br.lo.exp, br.hi.exp);
                    br = refine_bracket(*evs[fi], br, e + 1);
                }
            }
        }
        if (clean) return;
    }
}

}  // namespace detail

inline ZeroCertificate count_distinct_zeros(const CosinePolynomial& f) {
    if (f.is_zero()) throw std::domain_error("identically zero, uncountable zero set");
    ZeroCertificate cert;
    std::vector<Rational> g = f.coeffs();
    while (g.size() > 1 && cheb_eval(g, Rational(1)) == 0) {
        g = cheb_deflate(g, Rational(1));
        ++cert.multiplicity_at_zero;
    }
    while (g.size() > 1 && cheb_eval(g, Rational(-1)) == 0) {
        g = cheb_deflate(g, Rational(-1));
        ++cert.multiplicity_at_pi;
    }
    // g = f / ((x-1)^a (x+1)^b); (x-1)^a has sign (-1)^a just left of x = 1
    cert.sign_near_zero = sgn(cheb_eval(g, Rational(1))) * (cert.multiplicity_at_zero % 2 ? -1 : 1);
    const long n = static_cast<long>(g.size()) - 1;
    cert.method = n <= kSturmMaxDegree ? ZeroMethod::ExactSturm : ZeroMethod::ExactValidated;

    if (n >= 1) {
        if (detail::chebyshev_squarefree(g)) {
            cert.factors.push_back({g, 1, {}});
        } else {
            IntPoly mono = cheb_to_monomial(detail::integer_chebyshev(g));
            auto parts = squarefree_decomposition_modular(mono);
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (degree(parts[i]) < 1) continue;
                cert.factors.push_back({monomial_to_cheb(to_qpoly(parts[i])), static_cast<int>(i + 1), {}});
            }
        }
        for (auto& fac : cert.factors) {
            fac.roots = isolate_zeros(fac.cheb);
            if (cert.method == ZeroMethod::ExactSturm) {
                IntPoly mono = cheb_to_monomial(detail::integer_chebyshev(fac.cheb));
                const int s = sturm_count(mono, Rational(-1), Rational(1));
                if (s != static_cast<int>(fac.roots.size()))
                    throw std::logic_error("Sturm count " + std::to_string(s) + " disagrees with isolation count " +
                                           std::to_string(fac.roots.size()));
            }
        }
        detail::separate_brackets(cert.factors);
        for (const auto& fac : cert.factors)
            if (fac.multiplicity % 2 == 1)
                cert.sign_change_points.insert(cert.sign_change_points.end(), fac.roots.begin(), fac.roots.end());
        std::sort(cert.sign_change_points.begin(), cert.sign_change_points.end(),
                  [](const RootBracket& a, const RootBracket& b) { return a.lo < b.lo; });
    }
    cert.distinct_zero_count = 2 * cert.interior_zero_count() + (cert.multiplicity_at_zero > 0 ? 1 : 0) +
                               (cert.multiplicity_at_pi > 0 ? 1 : 0);
    return cert;
}

struct FastZeroCount {
    long lower_bound = 0;
    long sign_changes = 0;         // certified brackets inside (0, pi)
    std::size_t ambiguous_points = 0;
    std::size_t reevaluated_points = 0;
    std::size_t m = 0;
    double roundoff_bound = 0;
    bool zero_at_zero = false, zero_at_pi = false;
};

/// Certified lower bound on distinct zeros from an m-point FFT grid. Grid
/// values are trusted only beyond the FFT roundoff bound; points inside it
/// are re-evaluated in MPFR (up to `max_reevaluations`) or skipped.
/// Tangential zeros are generally missed.
inline FastZeroCount count_zeros_fast(const CosinePolynomial& f, std::size_t m, std::size_t max_reevaluations = 64) {
    if (f.is_zero()) throw std::domain_error("identically zero, uncountable zero set");
    if (m < 4 * static_cast<std::size_t>(std::max(0L, f.degree())) || m < 4)
        throw std::invalid_argument("count_zeros_fast: grid size m must be at least 4 * degree");
    FastZeroCount out;
    out.m = m;
    auto values = fft_cosine_values(f, m);
    out.roundoff_bound = fft_roundoff_bound(f, m);
    const int s0 = sgn(f.value_at_zero()), spi = sgn(f.value_at_pi());
    out.zero_at_zero = s0 == 0;
    out.zero_at_pi = spi == 0;

    std::unique_ptr<CellEvaluator> ev;
    const std::size_t half = m / 2;
    std::vector<int> signs;
    signs.reserve(half + 2);
    signs.push_back(s0);
    for (std::size_t j = 1; j <= half; ++j) {
        if (2 * j == m) break;  // t = pi handled exactly below
        const double v = values[j];
        int s = std::abs(v) > out.roundoff_bound ? (v > 0 ? 1 : -1) : 0;
        if (s == 0) {
            ++out.ambiguous_points;
            if (out.reevaluated_points < max_reevaluations) {
                if (!ev) ev = std::make_unique<CellEvaluator>(f.coeffs());
                ++out.reevaluated_points;
                Rational t(static_cast<long>(2 * j), static_cast<long>(m));
                t.canonicalize();
                s = ev->eval_angle(t, true).sign();
            }
        }
        signs.push_back(s);
    }
    signs.push_back(spi);
    int prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++out.sign_changes;
        prev = s;
    }
    out.lower_bound = 2 * out.sign_changes + (out.zero_at_zero ? 1 : 0) + (out.zero_at_pi ? 1 : 0);
    return out;
}

/// (-1)^p prod_i (cos t - cos t_i) over the sign changes t_i of f.
struct CompanionPolynomial {
    struct Root {
        RootBracket theta;          // units of pi
        double cos_lo = 0, cos_hi = 0;  // enclosure of cos(t_i)
        std::size_t factor = 0;     // index into defining_factors
    };
    std::vector<Root> roots;
    std::vector<std::vector<Rational>> defining_factors;  // Chebyshev coefficients
    int parity = 0;
    std::vector<double> cheb;        // cosine coefficients of P
    double coefficient_error = 0;    // bound on the l1 error of `cheb`

    long k() const { return static_cast<long>(roots.size()); }
    long degree() const { return 2 * k(); }
    /// Exponential coefficients on [-k, k].
    std::map<long, double> exponential() const {
        std::map<long, double> e;
        for (std::size_t r = 0; r < cheb.size(); ++r) {
            if (r == 0) {
                e[0] = cheb[0];
            } else {
                e[static_cast<long>(r)] = cheb[r] / 2;
                e[-static_cast<long>(r)] = cheb[r] / 2;
            }
        }
        return e;
    }
    double eval(double theta) const {
        double b1 = 0, b2 = 0, x = std::cos(theta);
        for (std::size_t j = cheb.size(); j-- > 1;) {
            double b = cheb[j] + 2 * x * b1 - b2;
            b2 = b1;
            b1 = b;
        }
        return (cheb.empty() ? 0 : cheb[0]) + x * b1 - b2;
    }
};

inline CompanionPolynomial companion(const CosinePolynomial& f, const ZeroCertificate& cert) {
    if (f.is_zero()) throw std::domain_error("companion: f is identically zero");
    if (!cert.exact()) throw std::invalid_argument("companion: requires an exact zero certificate");
    CompanionPolynomial P;
    P.parity = cert.sign_near_zero < 0 ? 1 : 0;
    for (std::size_t i = 0; i < cert.factors.size(); ++i) {
        const auto& fac = cert.factors[i];
        if (fac.multiplicity % 2 == 0) continue;
        P.defining_factors.push_back(fac.cheb);
        CellEvaluator ev(fac.cheb);
        for (const auto& br : fac.roots) {
            RootBracket fine = refine_bracket(ev, br, 60);
            CompanionPolynomial::Root root;
            root.theta = fine;
            root.factor = P.defining_factors.size() - 1;
            Mpfr a(128), c(128);
            set_pi_dyadic(a, fine.hi.numerator(), static_cast<unsigned long>(fine.hi.exp));
            mpfr_cos(c.get(), a.get(), MPFR_RNDD);
            root.cos_lo = mpfr_get_d(c.get(), MPFR_RNDD) - 0x1p-100;
            set_pi_dyadic(a, fine.lo.numerator(), static_cast<unsigned long>(fine.lo.exp));
            mpfr_cos(c.get(), a.get(), MPFR_RNDU);
            root.cos_hi = mpfr_get_d(c.get(), MPFR_RNDU) + 0x1p-100;
            P.roots.push_back(root);
        }
    }
    std::sort(P.roots.begin(), P.roots.end(),
              [](const auto& a, const auto& b) { return a.theta.lo < b.theta.lo; });
    P.cheb = {P.parity ? -1.0 : 1.0};
    double delta = 0;
    for (const auto& r : P.roots) {
        const double c = (r.cos_lo + r.cos_hi) / 2;
        delta += (r.cos_hi - r.cos_lo) / 2 + 0x1p-52;
        P.cheb = cheb_multiply(P.cheb, std::vector<double>{-c, 1.0});
    }
    // l1 norms of Chebyshev series are submultiplicative and each factor has l1 norm <= 2
    const double k = static_cast<double>(P.roots.size());
    P.coefficient_error = std::ldexp(1.0, static_cast<int>(P.roots.size())) * (delta + 4 * k * 0x1p-53);
    return P;
}

inline CompanionPolynomial companion(const CosinePolynomial& f) { return companion(f, count_distinct_zeros(f)); }

/// min over t_j = 2 pi j / m of P(t_j) f(t_j).
inline double companion_grid_minimum(const CosinePolynomial& f, const CompanionPolynomial& P, std::size_t m) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        const double t = 2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
        lo = std::min(lo, P.eval(t) * static_cast<double>(clenshaw(f, t)));
    }
    return lo;
}

/// An enclosure [lower, upper] of a real quantity.
namespace detail {

/// F(t) = C_0 t + sum_{r>=1} C_r sin(r t) / r at t = pi * q, with error bound.
inline void antiderivative(const std::vector<Rational>& c, const Rational& q, Mpfr& out, double& err) {
    const mpfr_prec_t P = 256;
    Mpfr th(P + 32), wr(P), wi(P), zr(P, 1.0), zi(P, 0.0), nr(P), ni(P), tmp(P), coef(P);
    set_pi_dyadic(th, q.get_num(), 0);
    mpfr_div_z(th.get(), th.get(), q.get_den_mpz_t(), MPFR_RNDN);
    mpfr_sin_cos(wi.get(), wr.get(), th.get(), MPFR_RNDN);
    coef.set(c.empty() ? Rational(0) : c[0]);
    mpfr_mul(out.get(), coef.get(), th.get(), MPFR_RNDN);
    double s1 = 0;
    for (std::size_t r = 1; r < c.size(); ++r) {
        mpfr_mul(nr.get(), zr.get(), wr.get(), MPFR_RNDN);
        mpfr_mul(tmp.get(), zi.get(), wi.get(), MPFR_RNDN);
        mpfr_sub(nr.get(), nr.get(), tmp.get(), MPFR_RNDN);
        mpfr_mul(ni.get(), zr.get(), wi.get(), MPFR_RNDN);
        mpfr_mul(tmp.get(), zi.get(), wr.get(), MPFR_RNDN);
        mpfr_add(ni.get(), ni.get(), tmp.get(), MPFR_RNDN);
        mpfr_swap(zr.get(), nr.get());
        mpfr_swap(zi.get(), ni.get());
        if (c[r] == 0) continue;
        coef.set(c[r] / static_cast<long>(r));
        mpfr_mul(tmp.get(), coef.get(), zi.get(), MPFR_RNDN);
        mpfr_add(out.get(), out.get(), tmp.get(), MPFR_RNDN);
        s1 += std::abs(c[r].get_d());
    }
    const double n = static_cast<double>(c.size());
    err = std::ldexp(1.0, -(static_cast<int>(P) - 4)) * (4 * n * s1 + (n + 8) * (s1 + std::abs(c.empty() ? 0.0 : c[0].get_d()) * 4));
}

}  // namespace detail

/// integral over [0, 2 pi] of |f| from the closed-form antiderivative between
/// certified sign changes.
inline Enclosure l1_norm_exact(const CosinePolynomial& f, const ZeroCertificate& cert) {
    if (!cert.exact())
        throw std::invalid_argument("l1_norm_exact: fast-path certificates are lower bounds only; an exact certificate is required");
    if (f.is_zero()) return {0, 0};
    // sign-change locations (units of pi), refined so that the error of using
    // a bracket midpoint is negligible
    std::vector<Rational> cuts;
    std::vector<double> widths;
    cuts.push_back(Rational(0));
    widths.push_back(0);
    for (const auto& fac : cert.factors) {
        if (fac.multiplicity % 2 == 0) continue;
        CellEvaluator ev(fac.cheb);
        for (const auto& br : fac.roots) {
            RootBracket fine = refine_bracket(ev, br, 50);
            Rational mid = (fine.lo.to_rational() + fine.hi.to_rational()) / 2;
            cuts.push_back(mid);
            widths.push_back(fine.width() * std::numbers::pi);
        }
    }
    cuts.push_back(Rational(1));
    widths.push_back(0);
    std::vector<std::size_t> order(cuts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cuts[a] < cuts[b]; });

    const double m1 = f.moment(1);
    Mpfr total(256), prev(256), cur(256), diff(256);
    double err_total = 0, prev_err = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        double e = 0;
        detail::antiderivative(f.coeffs(), cuts[order[i]], cur, e);
        // moving the cut from the true sign change to the midpoint changes F by at most m1 * w^2
        e += m1 * widths[order[i]] * widths[order[i]];
        if (i > 0) {
            mpfr_sub(diff.get(), cur.get(), prev.get(), MPFR_RNDN);
            mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
            mpfr_add(total.get(), total.get(), diff.get(), MPFR_RNDN);
            err_total += e + prev_err + std::ldexp(std::abs(diff.to_double()), -250);
        }
        mpfr_swap(prev.get(), cur.get());
        prev_err = e;
    }
    mpfr_mul_2ui(total.get(), total.get(), 1, MPFR_RNDN);
    err_total = 2 * err_total * (1 + 1e-10);
    Enclosure out;
    out.lower = mpfr_get_d(total.get(), MPFR_RNDD) - err_total;
    out.upper = mpfr_get_d(total.get(), MPFR_RNDU) + err_total;
    // round the error subtraction outward
    out.lower = std::nextafter(out.lower, -std::numeric_limits<double>::infinity());
    out.upper = std::nextafter(out.upper, std::numeric_limits<double>::infinity());
    return out;
}

inline Enclosure l1_norm_exact(const CosinePolynomial& f) { return l1_norm_exact(f, count_distinct_zeros(f)); }

}  // namespace coszero
