#include "coszero/polynomial.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace coszero;

namespace {

CosinePolynomial random_cosine(std::mt19937_64& rng, int max_deg, int den = 3) {
    std::uniform_int_distribution<int> deg(0, max_deg), num(-5, 5), d(1, den);
    std::vector<Rational> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) {
        x = Rational(num(rng), d(rng));
        x.canonicalize();
    }
    c.back() = c.back() == 0 ? Rational(1) : c.back();
    return CosinePolynomial(c);
}

ExponentialPolynomial random_exponential(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 5), freq(-4, 4), num(-3, 3);
    std::map<long, Rational> m;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        Rational v(num(rng), 2);
        v.canonicalize();
        m[freq(rng)] = v;
    }
    return ExponentialPolynomial(m);
}

// cos(r * pi * p / q) for the handful of angles with rational cosines
Rational exact_cos_multiple(long r, int which) {
    switch (which) {
        case 0: return 1;
        case 1: {
            const long m = ((r % 4) + 4) % 4;
            return m == 0 ? 1 : (m == 2 ? -1 : 0);
        }
        case 2: return r % 2 == 0 ? 1 : -1;
        default: return r % 3 == 0 ? Rational(1) : Rational(-1, 2);
    }
}

}  // namespace

TEST(Rational, ParsesAndReduces) {
    EXPECT_EQ(parse_rational("6/4"), Rational(3, 2));
    EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
    EXPECT_EQ(parse_rational(" 7 "), Rational(7));
}

TEST(Rational, RejectsMalformed) {
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
    EXPECT_THROW(parse_rational("1/-2"), std::invalid_argument);
    EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(CoefficientStats, Examples) {
    auto s = coefficient_stats(CoefficientSet{-1, 0, 1});
    EXPECT_EQ(s.M, 1);
    EXPECT_EQ(s.D, 1);
    EXPECT_EQ(s.cardinality, 3u);
    s = coefficient_stats(CoefficientSet{Rational(1, 2), 3});
    EXPECT_EQ(s.M, 3);
    EXPECT_EQ(s.D, 2);
    EXPECT_EQ(s.cardinality, 2u);
    s = coefficient_stats(CoefficientSet{0});
    EXPECT_EQ(s.M, 0);
    EXPECT_EQ(s.D, 1);
    EXPECT_EQ(s.cardinality, 1u);
}

TEST(CoefficientStats, DTimesElementIsInteger) {
    CoefficientSet R{Rational(1, 6), Rational(-3, 4), Rational(5, 9)};
    auto s = coefficient_stats(R);
    EXPECT_EQ(s.D, 36);
    for (const auto& x : R.elements()) EXPECT_EQ(Rational(x * s.D).get_den(), 1);
}

TEST(ExponentialPolynomial, BinomialSquare) {
    ExponentialPolynomial a({{0, 1}, {1, -1}});
    ExponentialPolynomial sq = a * a;
    EXPECT_EQ(sq, ExponentialPolynomial({{0, 1}, {1, -2}, {2, 1}}));
}

TEST(ExponentialPolynomial, ProductToSum) {
    for (long a = 0; a <= 4; ++a) {
        for (long b = 0; b <= 4; ++b) {
            auto ca = ExponentialPolynomial::from_cosine(CosinePolynomial::from_set({a}));
            auto cb = ExponentialPolynomial::from_cosine(CosinePolynomial::from_set({b}));
            std::map<long, Rational> expect;
            for (long s : {a + b, a - b}) {
                expect[s] += Rational(1, 4);
                expect[-s] += Rational(1, 4);
            }
            EXPECT_EQ(ca * cb, ExponentialPolynomial(expect)) << a << " " << b;
        }
    }
}

TEST(ExponentialPolynomial, S1TimesS2) {
    ExponentialPolynomial s1({{0, 1}, {1, -1}});
    ExponentialPolynomial s2 = s1 * ExponentialPolynomial({{0, 1}, {2, -1}});
    // (1-z)(1-z)(1-z^2) = 1 - 2z + 2z^3 - z^4
    EXPECT_EQ(s1 * s2, ExponentialPolynomial({{0, 1}, {1, -2}, {3, 2}, {4, -1}}));
}

TEST(ExponentialPolynomial, MultiplyCommutativeAssociative) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        auto a = random_exponential(rng), b = random_exponential(rng), c = random_exponential(rng);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(ExponentialPolynomial, CyclotomicCoefficientsMultiply) {
    FieldPtr K = CyclotomicField::get(3);
    ExponentialPolynomial e(3);
    e.set(1, CycElement::root_of_unity(K, 1));
    ExponentialPolynomial cube = e * e * e;
    ASSERT_EQ(cube.support(), std::vector<long>{3});
    EXPECT_EQ(cube.coefficient(3), CycElement(K, Rational(1)));
}

TEST(ExponentialPolynomial, EmbeddingRoundTrip) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        CosinePolynomial f = random_cosine(rng, 12);
        ExponentialPolynomial e = ExponentialPolynomial::from_cosine(f);
        EXPECT_EQ(e.value_at_zero().real_part().to_rational(), f.value_at_zero());
        EXPECT_EQ(e.to_cosine(), f);
        for (const auto& [r, a] : e.terms()) EXPECT_EQ(e.coefficient(-r), a);
    }
}

TEST(ToAlgebraic, Examples) {
    EXPECT_EQ(to_algebraic(CosinePolynomial({1, 1})), QPoly({1, 1}));
    EXPECT_EQ(to_algebraic(CosinePolynomial({0, 0, 1})), QPoly({-1, 0, 2}));
    EXPECT_EQ(to_algebraic(CosinePolynomial({1, 1, 1})), QPoly({0, 1, 2}));
    EXPECT_EQ(to_algebraic(CosinePolynomial()), QPoly());
}

TEST(ToAlgebraic, MatchesClosedFormCosines) {
    std::mt19937_64 rng(7);
    const Rational xs[] = {1, 0, -1, Rational(-1, 2)};  // cos of 0, pi/2, pi, 2pi/3
    for (int t = 0; t < 100; ++t) {
        CosinePolynomial f = random_cosine(rng, 30);
        QPoly g = to_algebraic(f);
        EXPECT_EQ(g.degree(), f.degree());
        for (int w = 0; w < 4; ++w) {
            Rational direct = 0;
            for (std::size_t r = 0; r < f.coeffs().size(); ++r)
                direct += f.coeffs()[r] * exact_cos_multiple(static_cast<long>(r), w);
            EXPECT_EQ(g.eval(xs[w]), direct);
        }
    }
}

TEST(Chebyshev, MonomialRoundTripAndDeflation) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 40; ++t) {
        CosinePolynomial f = random_cosine(rng, 25);
        QPoly g = to_algebraic(f);
        EXPECT_EQ(CosinePolynomial(monomial_to_cheb(g)), f);
        for (const Rational c : {Rational(1), Rational(-1), Rational(1, 3)}) {
            QPoly lin({-c, 1});
            auto h = monomial_to_cheb(g * lin);
            auto q = cheb_deflate(h, c);
            EXPECT_EQ(CosinePolynomial(q), f);
        }
        if (f.degree() >= 1 && g.eval(1) != 0) EXPECT_THROW(cheb_deflate(f.coeffs(), 1), std::domain_error);
    }
}

TEST(Chebyshev, ModularImageMatchesExact) {
    std::vector<Integer> c = {3, -1, 4, 1, -5, 9, 2};
    IntPoly g = cheb_to_monomial(c);
    std::uint64_t p = modp::large_prime(0);
    EXPECT_EQ(cheb_to_monomial_mod(c, p), modp::reduce(g, p));
}

TEST(Cyclotomic, PolynomialsAndInverse) {
    EXPECT_EQ(cyclotomic_polynomial(1), QPoly({-1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(3), QPoly({1, 1, 1}));
    EXPECT_EQ(cyclotomic_polynomial(12), QPoly({1, 0, -1, 0, 1}));
    FieldPtr K = CyclotomicField::get(7);
    CycElement z = CycElement::root_of_unity(K, 1);
    CycElement a = z * Rational(3) + CycElement(K, Rational(2)) - z.pow(4);
    EXPECT_EQ(a * a.inverse(), CycElement(K, Rational(1)));
    EXPECT_EQ(z.pow(7), CycElement(K, Rational(1)));
    EXPECT_EQ(z.conj() * z, CycElement(K, Rational(1)));
    EXPECT_NEAR(std::abs(z.to_complex() - std::polar(1.0, 2 * M_PI / 7)), 0.0, 1e-14);
}

TEST(Cyclotomic, LiftPreservesValue) {
    FieldPtr K3 = CyclotomicField::get(3), K12 = CyclotomicField::get(12);
    CycElement z3 = CycElement::root_of_unity(K3, 1);
    CycElement lifted = z3.lift(K12);
    EXPECT_EQ(lifted, CycElement::root_of_unity(K12, 4));
    EXPECT_NEAR(std::abs(lifted.to_complex() - z3.to_complex()), 0.0, 1e-14);
}

TEST(SquareFree, YunAndModular) {
    // (x-1)^3 (x+2)^2 (x^2+1)
    QPoly a({-1, 1}), b({2, 1}), c({1, 0, 1});
    QPoly g = a * a * a * b * b * c;
    auto f = squarefree_decomposition(g);
    ASSERT_EQ(f.size(), 3u);
    EXPECT_EQ(f[0], c);
    EXPECT_EQ(f[1], b);
    EXPECT_EQ(f[2], a);
    auto fm = squarefree_decomposition_modular(integer_primitive(Rational(3) * g));
    ASSERT_EQ(fm.size(), 3u);
    EXPECT_EQ(to_qpoly(fm[0]).monic(), c);
    EXPECT_EQ(to_qpoly(fm[1]).monic(), b);
    EXPECT_EQ(to_qpoly(fm[2]).monic(), a);
    EXPECT_FALSE(squarefree_certificate(integer_primitive(g)));
    EXPECT_TRUE(squarefree_certificate(integer_primitive(a * b * c)));
}

TEST(SquareFree, ModularGcdMatchesRational) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        QPoly common = to_algebraic(random_cosine(rng, 6, 1));
        QPoly x = common * to_algebraic(random_cosine(rng, 8, 1));
        QPoly y = common * to_algebraic(random_cosine(rng, 8, 1));
        if (common.is_zero() || x.is_zero() || y.is_zero()) continue;
        EXPECT_EQ(to_qpoly(modular_gcd(integer_primitive(x), integer_primitive(y))).monic(), gcd(x, y));
    }
}
