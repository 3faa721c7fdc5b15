#pragma once

// Roots of unity among the roots of a rational polynomial, the twisted
// difference operator rho^p Q(X + p) - Q(X), and the reconstruction of a
// sequence annihilated by a window kernel vector as a sum of periodic parts.

#include "coszero/cyclotomic.hpp"
#include "coszero/qpoly.hpp"
#include "coszero/windows.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

/// zeta_q^a with 0 <= a < q and gcd(a, q) = 1.
struct RootOfUnity {
    long q = 1;
    long a = 0;

    static RootOfUnity make(long q, long a) {
        if (q < 1) throw std::invalid_argument("root of unity order must be positive");
        a = ((a % q) + q) % q;
        const long g = gcd_long(a, q);
        if (a == 0) return {1, 0};
        return {q / g, a / g};
    }
    /// The value inside Q(zeta_L); q must divide L.
    CycElement value(const FieldPtr& field) const {
        const long L = field->conductor();
        if (L % q != 0) throw std::invalid_argument("root of unity does not live in the given field");
        return CycElement::root_of_unity(field, a * (L / q));
    }
    std::string to_string() const { return "zeta_" + std::to_string(q) + "^" + std::to_string(a); }
    friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

struct ExpRootTerm {
    CycElement amplitude;
    RootOfUnity root;
    CycElement at(long r) const { return amplitude * root.value(amplitude.field()).pow(r); }
};

struct CyclotomicFactor {
    long q = 1;
    int multiplicity = 0;
    friend bool operator==(const CyclotomicFactor&, const CyclotomicFactor&) = default;
};

/// All (q, m) with Phi_q^m exactly dividing P, over q with phi(q) <= deg P.
inline std::vector<CyclotomicFactor> cyclotomic_roots(const QPoly& P) {
    if (P.is_zero()) throw std::invalid_argument("cyclotomic_roots: zero polynomial");
    std::vector<CyclotomicFactor> out;
    const long n = P.degree();
    if (n < 1) return out;
    // phi(q) >= sqrt(q / 2), so phi(q) <= n forces q <= 2 n^2
    const long qmax = 2 * n * n + 2;
    for (long q = 1; q <= qmax; ++q) {
        if (euler_phi(q) > n) continue;
        const QPoly& phi = cyclotomic_polynomial(q);
        QPoly rest = P;
        int m = 0;
        while (rest.degree() >= phi.degree()) {
            auto [quo, rem] = divmod(rest, phi);
            if (!rem.is_zero()) break;
            rest = quo;
            ++m;
        }
        if (m > 0) out.push_back({q, m});
    }
    return out;
}

/// Polynomials in X with coefficients in a cyclotomic field, lowest first.
using CycPoly = std::vector<CycElement>;

inline CycPoly trim(CycPoly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

/// rho^p Q(X + p) - Q(X).
inline CycPoly difference_operator(const CycPoly& Q, const RootOfUnity& rho, long p) {
    if (p < 1) throw std::invalid_argument("difference_operator: p must be positive");
    if (Q.empty()) return {};
    FieldPtr field = CyclotomicField::get(lcm_long(Q.front().conductor(), rho.q));
    CycPoly Qf;
    for (const auto& c : Q) Qf.push_back(c.lift(field));
    const std::size_t n = Qf.size();
    // Q(X + p) = sum_j c_j sum_i binom(j, i) p^(j-i) X^i
    CycPoly shifted(n, CycElement(field));
    for (std::size_t j = 0; j < n; ++j) {
        Integer binom = 1;
        for (std::size_t i = 0; i <= j; ++i) {
            if (i > 0) {
                binom *= static_cast<unsigned long>(j - i + 1);
                binom /= static_cast<unsigned long>(i);
            }
            Integer pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(j - i));
            shifted[i] += Qf[j] * Rational(binom * pw);
        }
    }
    const CycElement rp = rho.value(field).pow(p);
    CycPoly out(n, CycElement(field));
    for (std::size_t i = 0; i < n; ++i) out[i] = rp * shifted[i] - Qf[i];
    return trim(out);
}

struct DifferenceKernel {
    std::size_t dimension = 0;
    std::string kind;       // "trivial" or "constants"
    std::string predicted;  // "constants" iff rho^p = 1
    bool agrees = false;
};

/// Kernel of the difference operator on polynomials of degree <= d, by exact
/// rank of its matrix on 1, X, ..., X^d.
inline DifferenceKernel kernel_of_difference(const RootOfUnity& rho, long p, long d) {
    if (d < 0) throw std::invalid_argument("kernel_of_difference: d must be non-negative");
    FieldPtr field = CyclotomicField::get(rho.q);
    const std::size_t n = static_cast<std::size_t>(d + 1);
    std::vector<std::vector<CycElement>> M(n, std::vector<CycElement>(n, CycElement(field)));
    for (std::size_t j = 0; j < n; ++j) {
        CycPoly basis(n, CycElement(field));
        basis[j] = CycElement(field, Rational(1));
        CycPoly img = difference_operator(trim(basis), rho, p);
        for (std::size_t i = 0; i < img.size(); ++i) M[i][j] = img[i].lift(field);
    }
    DifferenceKernel k;
    k.dimension = n - cyclotomic_rank(M);
    k.kind = k.dimension == 0 ? "trivial" : (k.dimension == 1 ? "constants" : "dimension " + std::to_string(k.dimension));
    const bool unit = rho.value(field).pow(p) == CycElement(field, Rational(1));
    k.predicted = unit ? "constants" : "trivial";
    k.agrees = k.kind == k.predicted;
    return k;
}

struct ExpressOptions {
    /// Accept inputs shorter than the lemma's length hypothesis; the result is
    /// then "verified-on-input" rather than "lemma-certified".
    bool allow_short = false;
    long max_conductor = 10000;
};

struct RootExpression {
    std::vector<ExpRootTerm> terms;
    long lo = 0, hi = -1;  // reconstruction verified exactly on [lo, hi] (0-based)
    std::string certification;  // "lemma-certified" or "verified-on-input"
    std::string warning;
    long non_unity_degree = 0;  // deg of the kernel polynomial minus its cyclotomic part
    long conductor = 1;
};

namespace detail {

inline std::size_t distinct_count(const RationalVector& x) {
    std::set<Rational> s(x.begin(), x.end());
    return s.size();
}

/// Whether N >= |R|^e + 3e (or N > ... when strict).
inline bool length_hypothesis(std::size_t N, std::size_t R, long e, bool strict) {
    Integer need;
    mpz_ui_pow_ui(need.get_mpz_t(), static_cast<unsigned long>(R), static_cast<unsigned long>(e));
    need += 3 * e;
    return strict ? Integer(static_cast<unsigned long>(N)) > need : Integer(static_cast<unsigned long>(N)) >= need;
}

/// Fits x(r) = sum alpha_i rho_i^r on [lo, hi] using the primitive roots of
/// the given orders and verifies the fit at every index of the range.
inline std::vector<ExpRootTerm> fit_roots(const RationalVector& x, const std::vector<long>& orders, long lo, long hi,
                                          long max_conductor, long& conductor) {
    long L = 1;
    for (long q : orders) {
        L = lcm_long(L, q);
        if (L > max_conductor)
            throw std::runtime_error("conductor " + std::to_string(L) + " exceeds the cap " + std::to_string(max_conductor));
    }
    conductor = L;
    FieldPtr K = CyclotomicField::get(L);
    std::vector<RootOfUnity> roots;
    for (long q : orders)
        for (long a = 0; a < q; ++a)
            if (gcd_long(a, q) == 1) roots.push_back(RootOfUnity::make(q, a));
    const std::size_t l = roots.size();
    if (static_cast<long>(l) > hi - lo + 1)
        throw std::invalid_argument("sequence range too short to determine " + std::to_string(l) + " amplitudes");
    std::vector<CycElement> rv;
    for (const auto& r : roots) rv.push_back(r.value(K));
    // Vandermonde system on rows lo .. lo + l - 1
    std::vector<std::vector<CycElement>> A(l, std::vector<CycElement>(l + 1, CycElement(K)));
    for (std::size_t i = 0; i < l; ++i) {
        const long r = lo + static_cast<long>(i);
        for (std::size_t j = 0; j < l; ++j) A[i][j] = rv[j].pow(r);
        A[i][l] = CycElement(K, x[static_cast<std::size_t>(r)]);
    }
    for (std::size_t k = 0; k < l; ++k) {
        std::size_t p = k;
        while (p < l && A[p][k].is_zero()) ++p;
        if (p == l) throw std::logic_error("fit_roots: singular Vandermonde system");
        std::swap(A[k], A[p]);
        const CycElement inv = A[k][k].inverse();
        for (std::size_t j = k; j <= l; ++j) A[k][j] *= inv;
        for (std::size_t i = 0; i < l; ++i) {
            if (i == k || A[i][k].is_zero()) continue;
            const CycElement f = A[i][k];
            for (std::size_t j = k; j <= l; ++j) A[i][j] -= f * A[k][j];
        }
    }
    std::vector<ExpRootTerm> terms;
    for (std::size_t j = 0; j < l; ++j)
        if (!A[j][l].is_zero()) terms.push_back({A[j][l], roots[j]});
    // exact reconstruction on the whole range, stepping powers incrementally
    std::vector<CycElement> cur;
    for (const auto& t : terms) cur.push_back(t.amplitude * t.root.value(K).pow(lo));
    std::vector<CycElement> step;
    for (const auto& t : terms) step.push_back(t.root.value(K));
    for (long r = lo; r <= hi; ++r) {
        CycElement s(K);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            s += cur[i];
            cur[i] *= step[i];
        }
        if (!(s == CycElement(K, x[static_cast<std::size_t>(r)])))
            throw std::domain_error("sequence not expressible; hypotheses violated: first bad index " + std::to_string(r));
    }
    return terms;
}

}  // namespace detail

/// x(r) = sum alpha_i rho_i^r with rho_i the roots of unity among the roots of
/// C_0 + C_1 X + ... + C_t X^t, verified on [t, N - t - 2] (0-based; the
/// 1-based range [t + 1, N - (t + 1)]).
inline RootExpression express_as_roots(const RationalVector& x, const RationalVector& v, const ExpressOptions& opt = {}) {
    QPoly P(v);
    if (P.is_zero()) throw std::invalid_argument("express_as_roots: kernel vector is zero");
    const long t = static_cast<long>(v.size()) - 1;
    const long N = static_cast<long>(x.size());
    if (t + static_cast<long>(v.size()) > N) throw std::invalid_argument("express_as_roots: sequence shorter than the kernel vector");
    for (const auto& w : windows(x, v.size()))
        if (dot(w, v) != 0) throw std::invalid_argument("express_as_roots: v is not orthogonal to every window");
    RootExpression out;
    out.certification = "lemma-certified";
    if (!detail::length_hypothesis(x.size(), detail::distinct_count(x), t + 1, false)) {
        if (!opt.allow_short)
            throw std::invalid_argument("express_as_roots: N < |R|^(t+1) + 3(t+1); pass allow_short to verify on this input only");
        out.certification = "verified-on-input";
        out.warning = "outside lemma hypothesis: N < |R|^(t+1) + 3(t+1)";
    }
    auto cyc = cyclotomic_roots(P);
    long cyc_degree = 0;
    std::vector<long> orders;
    for (const auto& c : cyc) {
        cyc_degree += c.multiplicity * euler_phi(c.q);
        orders.push_back(c.q);
    }
    long zero_roots = 0;
    while (zero_roots < static_cast<long>(v.size()) && v[static_cast<std::size_t>(zero_roots)] == 0) ++zero_roots;
    out.non_unity_degree = P.degree() - zero_roots - cyc_degree;
    out.lo = t;
    out.hi = N - t - 2;
    if (out.lo > out.hi) throw std::invalid_argument("express_as_roots: empty middle range");
    out.terms = detail::fit_roots(x, orders, out.lo, out.hi, opt.max_conductor, out.conductor);
    return out;
}

struct PeriodicComponent {
    long period = 1;
    RationalVector pattern;  // values at r = 0 .. period - 1 (mod period)
};

struct PeriodicDecomposition {
    long lo = 0, hi = -1;  // sum of components equals x exactly on [lo, hi] (0-based)
    std::vector<PeriodicComponent> components;
    long rank = 0;  // t
    double period_bound = 0;  // 16 t log2 log2 (t + 3)
    bool bound_ok = true;
    std::vector<long> flagged_periods;  // in (bound, 16]
    std::string certification;
    std::string warning;
};

inline double period_bound(long t) { return 16.0 * static_cast<double>(t) * std::log2(std::log2(static_cast<double>(t) + 3)); }

/// Splits x into periodic parts, one per order of the roots of unity found
/// from a front-supported window kernel vector; verified on [d, N - d].
inline PeriodicDecomposition periodic_decompose(const RationalVector& x, std::size_t d, const ExpressOptions& opt = {}) {
    const auto ws = window_rank(x, d);
    if (ws.rank >= d) throw std::domain_error("no decomposition; use dense path (windows have full rank)");
    PeriodicDecomposition out;
    out.rank = static_cast<long>(ws.rank);
    out.period_bound = period_bound(out.rank);
    out.certification = "lemma-certified";
    if (!detail::length_hypothesis(x.size(), detail::distinct_count(x), static_cast<long>(d), true)) {
        if (!opt.allow_short)
            throw std::invalid_argument("periodic_decompose: N <= |R|^d + 3d; pass allow_short to verify on this input only");
        out.certification = "verified-on-input";
        out.warning = "outside lemma hypothesis: N <= |R|^d + 3d";
    }
    RationalVector v = front_supported_kernel(x, d);
    std::size_t len = v.size();
    while (len > 1 && v[len - 1] == 0) --len;
    v.resize(len);
    const long N = static_cast<long>(x.size());
    out.lo = static_cast<long>(d);
    out.hi = std::min(N - 1, N - static_cast<long>(d));
    if (out.lo > out.hi) throw std::invalid_argument("periodic_decompose: empty range [d, N - d]");
    auto cyc = cyclotomic_roots(QPoly(v));
    std::vector<long> orders;
    for (const auto& c : cyc) orders.push_back(c.q);
    long conductor = 1;
    auto terms = detail::fit_roots(x, orders, out.lo, out.hi, opt.max_conductor, conductor);
    FieldPtr K = CyclotomicField::get(conductor);
    for (long q : orders) {
        PeriodicComponent comp;
        comp.period = q;
        bool any = false;
        for (long r = 0; r < q; ++r) {
            CycElement s(K);
            for (const auto& t : terms)
                if (t.root.q == q) {
                    s += t.at(r).lift(K);
                    any = true;
                }
            if (!s.is_rational()) throw std::logic_error("periodic_decompose: component is not rational");
            comp.pattern.push_back(s.to_rational());
        }
        if (!any) continue;
        if (static_cast<double>(q) > out.period_bound) {
            if (q <= 16)
                out.flagged_periods.push_back(q);
            else
                out.bound_ok = false;
        }
        out.components.push_back(std::move(comp));
    }
    return out;
}

/// Value of the decomposition at index r.
inline Rational decomposition_value(const PeriodicDecomposition& dec, long r) {
    Rational s = 0;
    for (const auto& c : dec.components) s += c.pattern[static_cast<std::size_t>(((r % c.period) + c.period) % c.period)];
    return s;
}

struct EulerPhiReport {
    long n_max = 0;
    long checked = 0;
    double min_ratio = INFINITY;  // phi(n) * 8 log2 log2 n / n
    long argmin = 0;
    bool holds = true;
};

/// phi(n) >= n / (8 log2 log2 n) for 4 <= n <= n_max, with phi from a sieve.
inline EulerPhiReport euler_phi_check(long n_max) {
    if (n_max < 4) throw std::invalid_argument("euler_phi_check: n_max must be at least 4");
    std::vector<long> phi(static_cast<std::size_t>(n_max + 1));
    for (long i = 0; i <= n_max; ++i) phi[static_cast<std::size_t>(i)] = i;
    for (long p = 2; p <= n_max; ++p)
        if (phi[static_cast<std::size_t>(p)] == p)
            for (long m = p; m <= n_max; m += p) phi[static_cast<std::size_t>(m)] -= phi[static_cast<std::size_t>(m)] / p;
    EulerPhiReport rep;
    rep.n_max = n_max;
    for (long n = 4; n <= n_max; ++n) {
        const double ll = std::log2(std::log2(static_cast<double>(n)));
        const double ratio = static_cast<double>(phi[static_cast<std::size_t>(n)]) * 8 * ll / static_cast<double>(n);
        ++rep.checked;
        if (ratio < rep.min_ratio) {
            rep.min_ratio = ratio;
            rep.argmin = n;
        }
    }
    // the double ratio is within 1e-12 relative of the true one
    rep.holds = rep.min_ratio >= 1 + 1e-9;
    return rep;
}

}  // namespace coszero
