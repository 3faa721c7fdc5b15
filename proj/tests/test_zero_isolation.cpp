#include "coszero/zeros.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace coszero;

namespace {

constexpr double kPi = std::numbers::pi;

// f whose algebraic image is prod (x - a_i)^{m_i}
CosinePolynomial from_roots(const std::vector<std::pair<Rational, int>>& roots, const Rational& lead = 1) {
    QPoly g = QPoly::constant(lead);
    for (const auto& [a, m] : roots)
        for (int i = 0; i < m; ++i) g = g * QPoly({-a, 1});
    return CosinePolynomial(monomial_to_cheb(g));
}

std::vector<long double> as_long_double(const CosinePolynomial& f) {
    std::vector<long double> c;
    for (const auto& x : f.coeffs()) c.push_back(static_cast<long double>(x.get_d()));
    return c;
}

long double clenshaw_ld(const std::vector<long double>& c, long double t) {
    const long double x = std::cos(t);
    long double b1 = 0, b2 = 0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
        long double b = c[k] + 2 * x * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return c[0] + x * b1 - b2;
}

// sign changes of f on a uniform grid over (0, pi)
long grid_sign_changes(const CosinePolynomial& f, long points) {
    const auto c = as_long_double(f);
    long changes = 0;
    int prev = 0;
    for (long j = 0; j <= points; ++j) {
        long double v = clenshaw_ld(c, std::numbers::pi_v<long double> * j / points);
        int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

// integral of |f| over [0, 2 pi]: grid sign changes, bisection, then
// Gauss-Kronrod on each smooth piece of [0, pi]
double l1_by_quadrature(const CosinePolynomial& f) {
    using boost::math::quadrature::gauss_kronrod;
    const auto c = as_long_double(f);
    auto g = [&](double t) { return static_cast<double>(clenshaw_ld(c, t)); };
    std::vector<double> cuts = {0.0};
    const int points = 20000;
    double prev_t = 0, prev_v = g(0);
    for (int j = 1; j <= points; ++j) {
        double t = kPi * j / points, v = g(t);
        if (prev_v != 0 && v != 0 && (v > 0) != (prev_v > 0)) {
            double lo = prev_t, hi = t;
            for (int it = 0; it < 80; ++it) {
                double mid = (lo + hi) / 2;
                if ((g(mid) > 0) == (prev_v > 0)) lo = mid; else hi = mid;
            }
            cuts.push_back((lo + hi) / 2);
        }
        prev_t = t;
        prev_v = v;
    }
    cuts.push_back(kPi);
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += std::abs(gauss_kronrod<double, 61>::integrate(g, cuts[i], cuts[i + 1], 8, 1e-13));
    return 2 * total;
}

}  // namespace

TEST(CountDistinctZeros, Examples) {
    auto c = count_distinct_zeros(CosinePolynomial({0, 1}));
    EXPECT_EQ(c.distinct_zero_count, 2);
    EXPECT_EQ(c.sign_changes(), 1);
    ASSERT_EQ(c.sign_change_points.size(), 1u);
    EXPECT_LT(c.sign_change_points[0].lo.to_double(), 0.5);
    EXPECT_GT(c.sign_change_points[0].hi.to_double(), 0.5);

    c = count_distinct_zeros(CosinePolynomial({1, 1}));
    EXPECT_EQ(c.distinct_zero_count, 1);
    EXPECT_EQ(c.sign_changes(), 0);
    EXPECT_EQ(c.multiplicity_at_pi, 1);  // simple in x, double in t

    c = count_distinct_zeros(CosinePolynomial({1, 1, 1}));
    EXPECT_EQ(c.distinct_zero_count, 4);
    EXPECT_EQ(c.sign_changes(), 2);
    EXPECT_EQ(c.method, ZeroMethod::ExactSturm);
}

TEST(CountDistinctZeros, ZeroPolynomialRejected) {
    EXPECT_THROW(count_distinct_zeros(CosinePolynomial()), std::domain_error);
}

TEST(CountDistinctZeros, ConstantHasNoZeros) {
    auto c = count_distinct_zeros(CosinePolynomial({Rational(-3, 2)}));
    EXPECT_EQ(c.distinct_zero_count, 0);
    EXPECT_EQ(c.sign_near_zero, -1);
}

TEST(CountDistinctZeros, KnownRootsWithMultiplicities) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> num(-95, 95), mult(1, 3), cnt(1, 8), endm(0, 2);
    for (int t = 0; t < 60; ++t) {
        std::map<Rational, int> roots;
        int k = cnt(rng);
        for (int i = 0; i < k; ++i) roots[Rational(num(rng), 97)] = mult(rng);
        int a = endm(rng), b = endm(rng);
        std::vector<std::pair<Rational, int>> all(roots.begin(), roots.end());
        if (a) all.push_back({Rational(1), a});
        if (b) all.push_back({Rational(-1), b});
        auto cert = count_distinct_zeros(from_roots(all, Rational(3, 7)));
        long odd = 0;
        for (const auto& [x, m] : roots) odd += m % 2;
        EXPECT_EQ(cert.distinct_zero_count, 2 * static_cast<long>(roots.size()) + (a > 0) + (b > 0));
        EXPECT_EQ(cert.sign_changes(), odd);
        EXPECT_EQ(cert.multiplicity_at_zero, a);
        EXPECT_EQ(cert.multiplicity_at_pi, b);
        // each sign-change bracket contains the arccos of an odd-multiplicity root
        std::vector<double> expect;
        for (const auto& [x, m] : roots)
            if (m % 2) expect.push_back(std::acos(x.get_d()) / kPi);
        std::sort(expect.begin(), expect.end());
        ASSERT_EQ(expect.size(), cert.sign_change_points.size());
        for (std::size_t i = 0; i < expect.size(); ++i) {
            EXPECT_LE(cert.sign_change_points[i].lo.to_double(), expect[i] + 1e-15);
            EXPECT_GE(cert.sign_change_points[i].hi.to_double(), expect[i] - 1e-15);
        }
    }
}

TEST(CountDistinctZeros, HighDegreeUsesValidatedCells) {
    // equispaced roots: interior values ~1e-15 of the coefficient scale
    std::vector<std::pair<Rational, int>> roots;
    for (int i = 1; i <= 90; ++i) roots.push_back({Rational(2 * i - 91, 91), 1});
    roots.push_back({Rational(1, 3), 2});
    roots.push_back({Rational(-1), 1});
    auto f = from_roots(roots);
    auto cert = count_distinct_zeros(f);
    EXPECT_EQ(cert.distinct_zero_count, 2 * 91 + 1);
    EXPECT_EQ(cert.sign_changes(), 90);

    std::mt19937_64 rng(4);
    std::vector<long> A;
    for (long r = 0; r < kSturmMaxDegree + 100; ++r)
        if (rng() % 3 == 0) A.push_back(r);
    auto g = CosinePolynomial::from_set(A);
    auto big = count_distinct_zeros(g);
    EXPECT_EQ(big.method, ZeroMethod::ExactValidated);
    EXPECT_EQ(big.sign_changes(), grid_sign_changes(g, 400000));
}

TEST(CountDistinctZeros, MatchesDenseGrid) {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> deg(1, 40), num(-9, 9);
    for (int t = 0; t < 40; ++t) {
        std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
        for (auto& x : c) x = num(rng);
        c.back() = 5;
        CosinePolynomial f(c);
        auto cert = count_distinct_zeros(f);
        if (cert.multiplicity_at_zero || cert.multiplicity_at_pi || cert.factors.size() != 1) continue;
        EXPECT_EQ(cert.sign_changes(), grid_sign_changes(f, 200000));
        EXPECT_EQ(cert.distinct_zero_count, 2 * cert.sign_changes());
    }
}

TEST(CountZerosFast, Examples) {
    EXPECT_GE(count_zeros_fast(CosinePolynomial({0, 1}), 64).lower_bound, 2);
    EXPECT_EQ(count_zeros_fast(CosinePolynomial({0, 1}), 64).lower_bound, 2);
    EXPECT_GE(count_zeros_fast(CosinePolynomial({1, 1}), 64).lower_bound, 0);
    EXPECT_THROW(count_zeros_fast(CosinePolynomial({0, 0, 0, 1}), 8), std::invalid_argument);
}

TEST(CountZerosFast, NeverExceedsExact) {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 30; ++t) {
        std::vector<long> A;
        for (long r = 0; r <= 200; ++r)
            if (rng() % 2) A.push_back(r);
        auto f = CosinePolynomial::from_set(A);
        auto exact = count_distinct_zeros(f);
        auto fast = count_zeros_fast(f, 4 * 256);
        EXPECT_LE(fast.lower_bound, exact.distinct_zero_count);
        bool all_sign_changes = exact.factors.size() == 1 && exact.multiplicity_at_zero == 0 &&
                                exact.multiplicity_at_pi == 0;
        if (all_sign_changes) {
            auto dense = count_zeros_fast(f, 1 << 16);
            EXPECT_EQ(dense.lower_bound, exact.distinct_zero_count);
        }
    }
}

TEST(Companion, Examples) {
    CosinePolynomial f({0, 1});
    auto P = companion(f);
    EXPECT_EQ(P.k(), 1);
    EXPECT_EQ(P.degree(), 2);
    ASSERT_EQ(P.cheb.size(), 2u);
    EXPECT_NEAR(P.cheb[0], 0.0, 1e-15);
    EXPECT_NEAR(P.cheb[1], 1.0, 1e-15);
    EXPECT_LE(P.roots[0].cos_lo, 0.0);
    EXPECT_GE(P.roots[0].cos_hi, 0.0);

    auto Q = companion(CosinePolynomial({-2, 1}));
    EXPECT_EQ(Q.k(), 0);
    ASSERT_EQ(Q.cheb.size(), 1u);
    EXPECT_EQ(Q.cheb[0], -1.0);
    EXPECT_EQ(companion(CosinePolynomial({3, 1})).cheb[0], 1.0);
}

TEST(Companion, NonnegativeProductOnGrid) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> deg(1, 30), num(-4, 4);
    for (int t = 0; t < 20; ++t) {
        std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
        for (auto& x : c) x = num(rng);
        c.back() = 1;
        CosinePolynomial f(c);
        auto P = companion(f);
        double pscale = 0;
        for (double v : P.cheb) pscale += std::abs(v);
        const double scale = f.moment(0) * pscale;
        EXPECT_GE(companion_grid_minimum(f, P, 20000), -1e-9 * scale);
        // P changes sign exactly at the sign changes of f
        EXPECT_EQ(P.k(), count_distinct_zeros(f).sign_changes());
    }
}

TEST(L1Norm, Examples) {
    auto a = l1_norm_exact(CosinePolynomial({0, 1}));
    EXPECT_LE(a.lower, 4.0);
    EXPECT_GE(a.upper, 4.0);
    EXPECT_LT(a.width(), 1e-12);
    auto b = l1_norm_exact(CosinePolynomial({1}));
    EXPECT_LE(b.lower, 2 * kPi);
    EXPECT_GE(b.upper, 2 * kPi);
}

TEST(L1Norm, MatchesQuadrature) {
    std::mt19937_64 rng(31);
    std::vector<CosinePolynomial> cases = {CosinePolynomial({1, 1, 1})};
    for (int t = 0; t < 6; ++t) {
        std::vector<Rational> c(12);
        for (auto& x : c) x = Rational(static_cast<long>(rng() % 11) - 5, 3);
        c.back() = 1;
        cases.emplace_back(c);
    }
    for (const auto& f : cases) {
        auto enc = l1_norm_exact(f);
        EXPECT_LT(enc.width(), 1e-9);
        EXPECT_NEAR(enc.mid(), l1_by_quadrature(f), 1e-8);
    }
}

TEST(L1Norm, RefusesFastCertificate) {
    ZeroCertificate c;
    c.method = ZeroMethod::GridBisection;
    EXPECT_THROW(l1_norm_exact(CosinePolynomial({0, 1}), c), std::invalid_argument);
}
