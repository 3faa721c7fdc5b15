#include "coszero/periodic.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace coszero;

namespace {

RationalVector seq(std::initializer_list<long> xs) {
    RationalVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

RationalVector periodic(const RationalVector& pattern, std::size_t n) {
    RationalVector x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(pattern[i % pattern.size()]);
    return x;
}

QPoly cyc_power(long q, int m) {
    QPoly p = QPoly::constant(Rational(1));
    for (int i = 0; i < m; ++i) p = p * cyclotomic_polynomial(q);
    return p;
}

// phi by trial factorization
long phi_naive(long n) {
    long r = n;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            r -= r / p;
        }
    if (n > 1) r -= r / n;
    return r;
}

}  // namespace

TEST(CyclotomicRoots, Examples) {
    EXPECT_EQ(cyclotomic_roots(QPoly({Rational(1), Rational(0), Rational(-1)})),
              (std::vector<CyclotomicFactor>{{1, 1}, {2, 1}}));
    EXPECT_EQ(cyclotomic_roots(QPoly({Rational(1), Rational(1), Rational(1)})), (std::vector<CyclotomicFactor>{{3, 1}}));
    EXPECT_TRUE(cyclotomic_roots(QPoly({Rational(-2), Rational(1)})).empty());
    EXPECT_THROW(cyclotomic_roots(QPoly()), std::invalid_argument);
}

TEST(CyclotomicRoots, RandomProductsRecoverMultiplicities) {
    std::mt19937_64 rng(31);
    const std::vector<long> qs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15};
    for (int t = 0; t < 40; ++t) {
        std::map<long, int> want;
        QPoly P = QPoly({Rational(3), Rational(0), Rational(1)});  // X^2 + 3, no unit roots
        if (rng() & 1) P = QPoly({Rational(-5), Rational(2)});
        for (int k = 0; k < 3; ++k) {
            long q = qs[rng() % qs.size()];
            int m = 1 + static_cast<int>(rng() % 2);
            want[q] += m;
            P = P * cyc_power(q, m);
        }
        std::vector<CyclotomicFactor> expect;
        for (auto [q, m] : want) expect.push_back({q, m});
        EXPECT_EQ(cyclotomic_roots(P), expect);
    }
}

TEST(DifferenceOperator, Examples) {
    auto K = CyclotomicField::get(1);
    CycPoly one = {CycElement(K, Rational(1))};
    CycPoly X = {CycElement(K, Rational(0)), CycElement(K, Rational(1))};
    EXPECT_TRUE(difference_operator(one, RootOfUnity::make(1, 0), 1).empty());
    auto dx = difference_operator(X, RootOfUnity::make(1, 0), 1);
    ASSERT_EQ(dx.size(), 1u);
    EXPECT_EQ(dx[0].to_rational(), 1);
    auto neg = difference_operator(one, RootOfUnity::make(2, 1), 1);
    ASSERT_EQ(neg.size(), 1u);
    EXPECT_EQ(neg[0].to_rational(), -2);
}

TEST(DifferenceOperator, MatchesPointEvaluation) {
    // (Delta Q)(n) = rho^p Q(n + p) - Q(n) at integer points
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        const long q = 1 + static_cast<long>(rng() % 7);
        auto rho = RootOfUnity::make(q, static_cast<long>(rng() % static_cast<unsigned long>(q)));
        const long p = 1 + static_cast<long>(rng() % 4);
        auto K = CyclotomicField::get(q);
        CycPoly Q;
        for (int j = 0; j < 4; ++j) Q.push_back(CycElement(K, Rational(static_cast<long>(rng() % 9) - 4)) * CycElement::root_of_unity(K, j));
        Q = trim(Q);
        if (Q.empty()) continue;
        auto D = difference_operator(Q, rho, p);
        auto eval = [&](const CycPoly& P, long n) {
            CycElement s(K);
            for (std::size_t j = P.size(); j-- > 0;) s = s * Rational(n) + P[j].lift(K);
            return s;
        };
        for (long n = -3; n <= 3; ++n) EXPECT_TRUE(eval(D, n) == rho.value(K).pow(p) * eval(Q, n + p) - eval(Q, n));
    }
}

TEST(KernelOfDifference, Examples) {
    EXPECT_EQ(kernel_of_difference(RootOfUnity::make(3, 1), 3, 4).kind, "constants");
    EXPECT_EQ(kernel_of_difference(RootOfUnity::make(3, 1), 2, 4).kind, "trivial");
    auto k = kernel_of_difference(RootOfUnity::make(1, 0), 5, 0);
    EXPECT_EQ(k.kind, "constants");
    EXPECT_EQ(k.dimension, 1u);
}

TEST(KernelOfDifference, DichotomyForSmallParameters) {
    for (long q = 1; q <= 12; ++q)
        for (long a = 0; a < q; ++a) {
            if (gcd_long(a, q) != 1) continue;
            for (long p = 1; p <= 12; ++p)
                for (long d : {0L, 3L, 6L}) {
                    auto k = kernel_of_difference(RootOfUnity::make(q, a), p, d);
                    EXPECT_TRUE(k.agrees) << q << " " << a << " " << p << " " << d;
                    EXPECT_EQ(k.dimension, p % q == 0 ? 1u : 0u);
                }
        }
}

TEST(ExpressAsRoots, Examples) {
    auto x = periodic(seq({1, 0}), 20);
    auto e = express_as_roots(x, seq({1, 0, -1}));
    EXPECT_EQ(e.certification, "lemma-certified");
    ASSERT_EQ(e.terms.size(), 2u);
    for (const auto& t : e.terms) {
        EXPECT_TRUE(t.amplitude.is_rational());
        EXPECT_EQ(t.amplitude.to_rational(), Rational(1, 2));
    }
    EXPECT_EQ(e.terms[0].root, RootOfUnity::make(1, 0));
    EXPECT_EQ(e.terms[1].root, RootOfUnity::make(2, 1));

    auto c = express_as_roots(RationalVector(10, Rational(7, 3)), seq({1, -1}));
    ASSERT_EQ(c.terms.size(), 1u);
    EXPECT_EQ(c.terms[0].amplitude.to_rational(), Rational(7, 3));

    RationalVector pw;
    for (int i = 0; i < 12; ++i) pw.emplace_back(1L << i);
    EXPECT_THROW(express_as_roots(pw, seq({2, -1})), std::invalid_argument);
    ExpressOptions loose;
    loose.allow_short = true;
    EXPECT_THROW(express_as_roots(pw, seq({2, -1}), loose), std::domain_error);
}

TEST(ExpressAsRoots, ShortInputNeedsOverride) {
    auto x = periodic(seq({1, 2, 0}), 15);  // N = 15 < 3^4 + 12
    const auto v = seq({1, 0, 0, -1});
    EXPECT_THROW(express_as_roots(x, v), std::invalid_argument);
    ExpressOptions opt;
    opt.allow_short = true;
    auto e = express_as_roots(x, v, opt);
    EXPECT_EQ(e.certification, "verified-on-input");
    EXPECT_FALSE(e.warning.empty());
    EXPECT_EQ(e.non_unity_degree, 0);
}

TEST(ExpressAsRoots, RecoversConstructedSums) {
    // x(r) = sum alpha_i rho_i^r with conjugate-closed rational sequences
    std::mt19937_64 rng(77);
    for (int t = 0; t < 25; ++t) {
        const long q = 2 + static_cast<long>(rng() % 5);
        RationalVector pat;
        for (long i = 0; i < q; ++i) pat.emplace_back(static_cast<long>(rng() % 3));
        // x^q - 1 annihilates any q-periodic sequence
        RationalVector v(static_cast<std::size_t>(q + 1), Rational(0));
        v[0] = -1;
        v[static_cast<std::size_t>(q)] = 1;
        auto x = periodic(pat, 40);
        ExpressOptions opt;
        opt.allow_short = true;
        auto e = express_as_roots(x, v, opt);
        // amplitudes are the discrete Fourier coefficients of the pattern
        auto K = CyclotomicField::get(q);
        for (const auto& term : e.terms) {
            CycElement dft(K);
            const long k = term.root.a * (q / term.root.q);
            for (long r = 0; r < q; ++r) dft += CycElement(K, pat[static_cast<std::size_t>(r)]) * CycElement::root_of_unity(K, -k * r);
            EXPECT_TRUE(term.amplitude.lift(K) == dft * Rational(1, q));
        }
        for (long r = e.lo; r <= e.hi; ++r) {
            CycElement s(K);
            for (const auto& term : e.terms) s += term.at(r).lift(K);
            EXPECT_TRUE(s == CycElement(K, x[static_cast<std::size_t>(r)]));
        }
    }
}

TEST(PeriodicDecompose, Examples) {
    auto dec = periodic_decompose(periodic(seq({1, 0}), 40), 3);
    ASSERT_EQ(dec.components.size(), 2u);
    EXPECT_EQ(dec.components[0].period, 1);
    EXPECT_EQ(dec.components[0].pattern, (RationalVector{Rational(1, 2)}));
    EXPECT_EQ(dec.components[1].period, 2);
    EXPECT_EQ(dec.components[1].pattern, (RationalVector{Rational(1, 2), Rational(-1, 2)}));
    EXPECT_NEAR(dec.period_bound, 32 * std::log2(std::log2(5.0)), 1e-12);
    EXPECT_TRUE(dec.bound_ok);

    auto c = periodic_decompose(RationalVector(20, Rational(4)), 2);
    ASSERT_EQ(c.components.size(), 1u);
    EXPECT_EQ(c.components[0].period, 1);
    EXPECT_EQ(c.components[0].pattern, seq({4}));

    RationalVector pw;
    for (int i = 0; i < 12; ++i) pw.emplace_back(1L << i);
    EXPECT_THROW(periodic_decompose(pw, 1), std::domain_error);
}

TEST(PeriodicDecompose, PeriodSixOverZeroOne) {
    std::mt19937_64 rng(6);
    int done = 0;
    for (int t = 0; t < 20; ++t) {
        RationalVector pat;
        for (int i = 0; i < 6; ++i) pat.emplace_back(static_cast<long>(rng() & 1));
        auto x = periodic(pat, 160);
        if (window_rank(x, 7).rank >= 7) continue;
        auto dec = periodic_decompose(x, 7);
        ++done;
        EXPECT_EQ(dec.certification, "lemma-certified");
        EXPECT_TRUE(dec.bound_ok);
        for (const auto& c : dec.components) {
            EXPECT_LE(c.period, 6);
            EXPECT_EQ(6 % c.period, 0);
            EXPECT_LE(static_cast<double>(c.period), dec.period_bound);
        }
        for (long r = dec.lo; r <= dec.hi; ++r) EXPECT_EQ(decomposition_value(dec, r), x[static_cast<std::size_t>(r)]);
    }
    EXPECT_EQ(done, 20);
}

TEST(EulerPhi, Examples) {
    auto r5 = euler_phi_check(5);
    EXPECT_TRUE(r5.holds);
    EXPECT_EQ(r5.checked, 2);
    // n = 4: phi = 2, 8 log2 log2 4 = 8, ratio 2 * 8 / 4 = 4
    EXPECT_DOUBLE_EQ(euler_phi_check(4).min_ratio, 4.0);
    EXPECT_THROW(euler_phi_check(3), std::invalid_argument);
}

TEST(EulerPhi, SieveMatchesTrialFactoringAndBoundHolds) {
    for (long n = 1; n <= 3000; ++n) EXPECT_EQ(euler_phi(n), phi_naive(n));
    auto rep = euler_phi_check(1000000);
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.checked, 1000000 - 3);
    EXPECT_NEAR(rep.min_ratio * static_cast<double>(rep.argmin), 8.0 * std::log2(std::log2(static_cast<double>(rep.argmin))) * phi_naive(rep.argmin), 1e-6);
}
