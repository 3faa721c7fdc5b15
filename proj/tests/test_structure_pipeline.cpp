#include "coszero/structure.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace coszero;

namespace {

CosinePolynomial cosine(const std::vector<long>& c) {
    std::vector<Rational> q;
    for (long x : c) q.emplace_back(x);
    return CosinePolynomial(q);
}

// brute-force (P * S_D * f)^ with rational maps
std::map<long, Rational> brute_product(const std::map<long, Rational>& P, long D, const CosinePolynomial& f) {
    std::map<long, Rational> S{{0, Rational(1)}};
    for (long r = 1; r <= D; ++r) {
        std::map<long, Rational> next;
        for (const auto& [j, a] : S) {
            next[j] += a;
            next[j + r] -= a;
        }
        S = next;
    }
    std::map<long, Rational> fe;
    for (long r = 0; r <= f.degree(); ++r) {
        const Rational c = f.coeff(static_cast<std::size_t>(r));
        if (r == 0)
            fe[0] += c;
        else {
            fe[r] += c / 2;
            fe[-r] += c / 2;
        }
    }
    std::map<long, Rational> out;
    for (const auto& [a, x] : P)
        for (const auto& [b, y] : S)
            for (const auto& [c, z] : fe) out[a + b + c] += x * y * z;
    return out;
}

std::vector<long> nonzero(const std::map<long, Rational>& m) {
    std::vector<long> s;
    for (const auto& [r, v] : m)
        if (v != 0) s.push_back(r);
    return s;
}

double grid_l1(const CosinePolynomial& f, std::size_t m) {
    double s = 0;
    for (std::size_t j = 0; j < m; ++j) s += std::abs(f.eval(2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m)));
    return s * 2 * std::numbers::pi / static_cast<double>(m);
}

std::set<long> nonneg_support(const CosinePolynomial& f, const ExponentialPolynomial& Q) {
    std::set<long> B;
    for (long r : (Q * ExponentialPolynomial::from_cosine(f)).support())
        if (r >= 0) B.insert(r);
    return B;
}

}  // namespace

TEST(CorrelationReport, DirichletTimesS1MatchesBruteForce) {
    auto f = cosine({1, 1, 1, 1});  // D_3
    auto rep = correlation_report(f, ExponentialPolynomial::monomial(0), 1);
    EXPECT_EQ(rep.support, nonzero(brute_product({{0, Rational(1)}}, 1, f)));
    EXPECT_EQ(rep.support, (std::vector<long>{-3, 0, 1, 4}));
    EXPECT_TRUE(rep.exact);
    // int D_3 = 2 pi; epsilon = 2 pi / int |D_3|
    ASSERT_TRUE(rep.epsilon_defined);
    EXPECT_NEAR(rep.epsilon, 2 * std::numbers::pi / grid_l1(f, 1 << 18), 1e-6);
    EXPECT_EQ(rep.l1_method, "closed-form");
}

TEST(CorrelationReport, CosineAndZero) {
    auto rep = correlation_report(cosine({0, 1}), ExponentialPolynomial::monomial(0), 1);
    EXPECT_EQ(rep.support, (std::vector<long>{-1, 0, 1, 2}));
    EXPECT_TRUE(rep.epsilon_defined);
    EXPECT_NEAR(rep.epsilon, 0.0, 1e-12);  // int cos = 0

    auto z = correlation_report(CosinePolynomial(), ExponentialPolynomial::monomial(0), 2);
    EXPECT_TRUE(z.support.empty());
    EXPECT_FALSE(z.epsilon_defined);
    EXPECT_TRUE(std::isnan(z.epsilon));
    EXPECT_THROW(correlation_report(cosine({1}), ExponentialPolynomial(), 1), std::invalid_argument);
}

TEST(CorrelationReport, RandomExactMatchesBruteForce) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        std::vector<long> c;
        for (int i = 0; i < 12; ++i) c.push_back(static_cast<long>(rng() % 3) - 1);
        auto f = cosine(c);
        std::map<long, Rational> P;
        for (long r = -2; r <= 2; ++r) P[r] = Rational(static_cast<long>(rng() % 5) - 2);
        if (nonzero(P).empty()) P[0] = 1;
        const long D = 1 + static_cast<long>(rng() % 3);
        auto rep = correlation_report(f, ExponentialPolynomial(P), D);
        EXPECT_EQ(rep.support, nonzero(brute_product(P, D, f)));
        if (rep.epsilon_defined) {
            EXPECT_GE(rep.epsilon, 0);
            EXPECT_LE(rep.epsilon, 1);
        }
    }
}

TEST(CorrelationReport, CompanionGivesFullCorrelation) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        std::vector<long> c;
        for (int i = 0; i < 15; ++i) c.push_back(static_cast<long>(rng() % 3) - 1);
        c[0] = 1;
        auto f = cosine(c);
        auto P = companion(f);
        auto rep = correlation_report(f, P, 2);
        EXPECT_FALSE(rep.exact);
        EXPECT_GT(rep.eps_zero, 0);
        ASSERT_TRUE(rep.epsilon_defined);
        EXPECT_NEAR(rep.epsilon, 1.0, 1e-6);  // P f >= 0
        EXPECT_FALSE(rep.support.empty());
    }
}

TEST(ReduceToStructure, SingleFlatBlock) {
    std::vector<long> c(61, 1);
    for (int r = 0; r < 10; ++r) c[static_cast<std::size_t>(r)] = 2;
    auto f = cosine(c);
    std::set<long> B;
    for (long r = 0; r <= 9; ++r) B.insert(r);
    B.insert(61);
    auto s = reduce_to_structure(f, B, 1, 10);
    ASSERT_EQ(s.blocks.size(), 1u);
    EXPECT_EQ(s.blocks[0].lo, 11);
    EXPECT_EQ(s.blocks[0].hi, 59);
    EXPECT_EQ(s.blocks[0].period, 1);
    EXPECT_EQ(s.blocks[0].pattern, (RationalVector{Rational(1, 2)}));
    std::vector<long> S;
    for (long r = 0; r <= 10; ++r) S.push_back(r);
    S.push_back(60);
    EXPECT_EQ(s.exceptional_set, S);
    EXPECT_EQ(s.error_sup_bound, Rational(20 + 1 + 1));
    EXPECT_TRUE(s.error_term + s.blocks[0].poly == f);
    // |R| = 2, d = 1: default threshold 5 so 10 is above it
    EXPECT_EQ(s.default_threshold, 5);
    EXPECT_EQ(s.status, "certified");
    EXPECT_EQ(reduce_to_structure(f, B, 1, 3).status, "heuristic structure");
}

TEST(ReduceToStructure, FullSupportAndUnboundedGap) {
    auto f = cosine({1, 2, 0, 1, 1, 1, 1, 1, 1, 1, 1});
    std::set<long> B;
    for (long r = 0; r <= 10; ++r) B.insert(r);
    auto s = reduce_to_structure(f, B, 2);
    EXPECT_TRUE(s.blocks.empty());
    EXPECT_TRUE(s.error_term == f);
    // a gap running off the end is the unbounded one and never becomes a block
    auto u = reduce_to_structure(f, {0, 1, 2}, 1, 2);
    EXPECT_TRUE(u.blocks.empty());
}

TEST(ReduceToStructure, TwoRegionsWithDifferentPeriods) {
    std::vector<long> c;
    for (int r = 0; r < 5; ++r) c.push_back(3);
    for (int r = 5; r < 45; ++r) c.push_back(r % 2 ? 1 : 0);
    const std::vector<long> junk = {2, -1, 3, 0, 2};
    for (long j : junk) c.push_back(j);
    for (int r = 50; r < 100; ++r) c.push_back((r % 3) == 2 ? 0 : 1);
    auto f = cosine(c);
    auto Q = sk(3).exponential();
    auto B = nonneg_support(f, Q);
    auto s = reduce_to_structure(f, B, sk_degree(3), 20);
    ASSERT_EQ(s.blocks.size(), 2u);
    EXPECT_EQ(s.blocks[0].period, 2);
    EXPECT_EQ(s.blocks[1].period, 3);
    EXPECT_LT(s.blocks[0].hi, s.blocks[1].lo);
    CosinePolynomial sum = s.error_term;
    for (const auto& b : s.blocks) {
        sum = sum + b.poly;
        for (long r = b.lo; r <= b.hi; ++r)
            EXPECT_EQ(Rational(f.coeff(static_cast<std::size_t>(r)) / 2), b.pattern[static_cast<std::size_t>((r - b.lo) % b.period)]);
    }
    EXPECT_TRUE(sum == f);
    EXPECT_LE(Rational(static_cast<long>(s.exceptional_set.size())) * s.coefficient_bound, Rational(1000));
    EXPECT_LE(s.error_sup_bound, Rational(static_cast<long>(s.exceptional_set.size())) * s.coefficient_bound);
}

TEST(ReduceToStructure, FalseSupportNamesTheBlock) {
    std::mt19937_64 rng(2);
    std::vector<long> c;
    for (int r = 0; r < 40; ++r) c.push_back(static_cast<long>(rng() % 5));
    c.back() = 1;
    auto f = cosine(c);
    try {
        reduce_to_structure(f, {0, 40}, 1, 5);
        FAIL() << "expected a certification failure";
    } catch (const std::domain_error& e) {
        EXPECT_NE(std::string(e.what()).find("block [2, 38]"), std::string::npos) << e.what();
    }
    EXPECT_THROW(reduce_to_structure(f, {0}, 0), std::invalid_argument);
}

TEST(ReduceToStructure, RandomPeriodicConstructions) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 15; ++t) {
        std::vector<long> c;
        std::vector<std::pair<long, long>> regions;
        for (int k = 0; k < 3; ++k) {
            for (int j = 0; j < 4; ++j) c.push_back(static_cast<long>(rng() % 4));
            const long p = 1 + static_cast<long>(rng() % 3);
            std::vector<long> pat;
            for (long i = 0; i < p; ++i) pat.push_back(static_cast<long>(rng() % 3));
            const long start = static_cast<long>(c.size());
            for (int j = 0; j < 40; ++j) c.push_back(pat[static_cast<std::size_t>(j) % pat.size()]);
            regions.push_back({start, p});
        }
        c.push_back(1);
        auto f = cosine(c);
        auto B = nonneg_support(f, sk(3).exponential());
        auto s = reduce_to_structure(f, B, sk_degree(3), 12);
        CosinePolynomial sum = s.error_term;
        for (const auto& b : s.blocks) {
            sum = sum + b.poly;
            EXPECT_LE(b.period, 3);
            for (long r = b.lo; r <= b.hi; ++r)
                EXPECT_EQ(Rational(f.coeff(static_cast<std::size_t>(r)) / 2), b.pattern[static_cast<std::size_t>((r - b.lo) % b.period)]);
        }
        EXPECT_TRUE(sum == f);
        auto form = to_rational_function_form(s);
        EXPECT_EQ(form.size(), s.blocks.size());
    }
}

TEST(RationalFunctionForm, Examples) {
    std::vector<long> c(26, 0);
    for (int r = 5; r <= 25; ++r) c[static_cast<std::size_t>(r)] = 1;
    StructuredForm s;
    StructuredBlock b;
    b.lo = 5;
    b.hi = 25;
    b.period = 1;
    b.pattern = {Rational(1, 2)};
    b.poly = cosine(c);
    s.blocks.push_back(b);
    auto form = to_rational_function_form(s);
    ASSERT_EQ(form.size(), 1u);
    EXPECT_EQ(form[0].p, 1);
    EXPECT_EQ(form[0].q, (RationalVector{Rational(1, 2)}));
    EXPECT_EQ(form[0].N, 5);
    EXPECT_EQ(form[0].M, 26);
    EXPECT_TRUE(form[0].remainder.empty());

    std::vector<long> alt(20, 0);
    for (int r = 4; r < 20; ++r) alt[static_cast<std::size_t>(r)] = r % 2 ? 0 : 1;
    StructuredForm s2;
    StructuredBlock b2;
    b2.lo = 4;
    b2.hi = 18;  // 15 terms: seven periods plus one remainder
    b2.period = 2;
    b2.pattern = {Rational(1, 2), Rational(0)};
    std::vector<long> trimmed(alt.begin(), alt.begin() + 19);
    b2.poly = cosine(trimmed);
    s2.blocks.push_back(b2);
    auto f2 = to_rational_function_form(s2);
    ASSERT_EQ(f2.size(), 1u);
    EXPECT_EQ(f2[0].p, 2);
    EXPECT_EQ(f2[0].q.size(), 2u);
    EXPECT_EQ(f2[0].M, 18);
    EXPECT_EQ(f2[0].remainder.size(), 1u);

    EXPECT_TRUE(to_rational_function_form(StructuredForm{}).empty());
}

TEST(RationalFunctionForm, ClosedFormMatchesDirectSum) {
    // Q(t) (e^{iNt} - e^{iMt}) / (1 - e^{ipt}) + remainder = sum_{r in I} f^(r) e^{irt}
    std::vector<long> c(40, 0);
    const std::vector<long> pat = {2, 0, 1};
    for (int r = 7; r <= 37; ++r) c[static_cast<std::size_t>(r)] = pat[static_cast<std::size_t>(r - 7) % 3];
    StructuredForm s;
    StructuredBlock b;
    b.lo = 7;
    b.hi = 37;
    b.period = 3;
    for (long x : pat) {
        b.pattern.push_back(Rational(x, 2));
        b.pattern.back().canonicalize();
    }
    b.poly = cosine(std::vector<long>(c.begin(), c.begin() + 38));
    s.blocks.push_back(b);
    auto t = to_rational_function_form(s).at(0);
    for (double th : {0.3, 1.1, 2.5, 4.0}) {
        std::complex<double> q = 0, direct = 0;
        for (std::size_t a = 0; a < t.q.size(); ++a) q += t.q[a].get_d() * std::polar(1.0, static_cast<double>(a) * th);
        auto e = [&](long k) { return std::polar(1.0, static_cast<double>(k) * th); };
        std::complex<double> closed = q * (e(t.N) - e(t.M)) / (1.0 - e(t.p));
        for (const auto& [r, v] : t.remainder) closed += v.get_d() * e(r);
        for (long r = b.lo; r <= b.hi; ++r) direct += (c[static_cast<std::size_t>(r)] / 2.0) * e(r);
        EXPECT_LT(std::abs(closed - direct), 1e-10);
    }
}

TEST(SumsOfDBound, Examples) {
    auto v = sums_of_D_bound(1, Rational(1), 1, Rational(0), Rational(1));
    EXPECT_TRUE(v.applicable);
    EXPECT_DOUBLE_EQ(v.value, -1.0);
    Integer big;
    mpz_ui_pow_ui(big.get_mpz_t(), 2, 241);
    auto w = sums_of_D_bound(1, Rational(1), 1, Rational(0), Rational(big));
    EXPECT_NEAR(w.value, 241.0 / 4800.0 - 1.0, 1e-12);
    EXPECT_FALSE(sums_of_D_bound(1, Rational(2), 1, Rational(3), Rational(3)).applicable);
    EXPECT_FALSE(sums_of_D_bound(1, Rational(2), 1, Rational(5), Rational(3)).applicable);
}

TEST(SumsOfDBound, NeverExceedsSignChangesOnBuiltInstances) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        std::vector<Rational> c(1, Rational(0));
        long l = 0;
        Rational Amax = 0;
        for (int i = 0; i < 3; ++i) {
            const Rational A(static_cast<long>(rng() % 5) + 1, 2);
            const long len = 5 + static_cast<long>(rng() % 30);
            for (long r = 0; r < len; ++r) c.push_back(A);
            c.push_back(Rational(0));
            Amax = std::max(Amax, A);
            ++l;
        }
        c[0] = Rational(static_cast<long>(rng() % 3));
        CosinePolynomial g(c);
        const Rational E = abs_value(c[0]);
        const Rational M = Amax / 2;
        auto b = sums_of_D_bound(l, M, 2, E, g.value_at_zero());
        const long changes = count_distinct_zeros(g).sign_changes();
        if (b.applicable) EXPECT_GE(static_cast<double>(2 * changes), b.value);
    }
}

TEST(StructuredZeroBound, Averages) {
    std::vector<long> c(30, 0);
    for (int r = 5; r < 30; ++r) c[static_cast<std::size_t>(r)] = 1;
    std::set<long> B{0, 1, 2, 3, 4, 30};
    auto s = reduce_to_structure(cosine(c), B, 1, 3);
    auto res = structured_zero_bound(s, Rational(1), 1, Rational(2));
    ASSERT_EQ(res.A.size(), 1u);
    EXPECT_EQ(res.A[0], 2 * s.blocks[0].pattern[0]);
    EXPECT_EQ(res.A[0], Rational(1));

    std::vector<long> alt(40, 0);
    for (int r = 5; r < 40; ++r) alt[static_cast<std::size_t>(r)] = r % 2;
    std::set<long> B2{0, 1, 2, 3, 4, 40};
    auto s2 = reduce_to_structure(cosine(alt), B2, 2, 3);
    auto r2 = structured_zero_bound(s2, Rational(1), 2, Rational(4));
    ASSERT_EQ(r2.A.size(), 1u);
    EXPECT_EQ(s2.blocks[0].period, 2);
    EXPECT_EQ(r2.A[0], Rational(1, 2));
}

TEST(StructuredZeroBound, HypothesesAndInapplicable) {
    std::vector<Rational> c(30, Rational(0));
    for (int r = 5; r < 30; ++r) c[static_cast<std::size_t>(r)] = Rational(1, 3);
    auto s = reduce_to_structure(CosinePolynomial(c), {0, 1, 2, 3, 4, 30}, 1, 3);
    EXPECT_THROW(structured_zero_bound(s, Rational(1), 1, Rational(2)), std::domain_error);

    std::vector<long> alt(40, 0);
    for (int r = 5; r < 40; ++r) alt[static_cast<std::size_t>(r)] = r % 2;
    auto s2 = reduce_to_structure(cosine(alt), {0, 1, 2, 3, 4, 40}, 2, 3);
    EXPECT_THROW(structured_zero_bound(s2, Rational(1), 1, Rational(4)), std::domain_error);  // period 2 > P
    EXPECT_THROW(structured_zero_bound(s2, Rational(1), 2, Rational(0)), std::domain_error);  // |E| > K
    auto small = structured_zero_bound(s2, Rational(1), 2, Rational(40));
    EXPECT_FALSE(small.bound.applicable);  // Y <= 0

    StructuredBoundOptions stmt;
    stmt.statement_y = true;
    auto y = structured_zero_bound(s2, Rational(1), 2, Rational(4), stmt);
    EXPECT_EQ(y.y, s2.f0 - 8 * 4 + Rational(4));
}

TEST(StructuredZeroBound, NeverExceedsMeasuredZeros) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 15; ++t) {
        std::vector<long> c;
        for (int k = 0; k < 2; ++k) {
            for (int j = 0; j < 3; ++j) c.push_back(static_cast<long>(rng() % 3));
            const long p = 1 + static_cast<long>(rng() % 2);
            std::vector<long> pat;
            for (long i = 0; i < p; ++i) pat.push_back(2 * static_cast<long>(rng() % 3));
            for (int j = 0; j < 60; ++j) c.push_back(pat[static_cast<std::size_t>(j) % pat.size()]);
        }
        c.push_back(1);
        auto f = cosine(c);
        auto B = nonneg_support(f, sk(2).exponential());
        auto s = reduce_to_structure(f, B, sk_degree(2), 10);
        Rational M = 0;
        long P = 1;
        for (const auto& b : s.blocks) {
            P = std::max(P, b.period);
            for (const auto& v : b.pattern) M = std::max(M, abs_value(v));
        }
        if (M == 0) M = 1;
        auto res = structured_zero_bound(s, M, P, s.error_sup_bound);
        const long zeros = count_distinct_zeros(f).distinct_zero_count;
        if (res.bound.applicable) EXPECT_LE(res.bound.value, static_cast<double>(zeros));
    }
}
