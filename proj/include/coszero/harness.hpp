#pragma once

// Batch sweeps over families of 0/1 cosine polynomials, the local search for
// few-zero examples, and the verification suites behind `coszero verify`.

#include "coszero/bounds.hpp"
#include "coszero/kernels.hpp"
#include "coszero/periodic.hpp"
#include "coszero/rng.hpp"
#include "coszero/structure.hpp"
#include "coszero/windows.hpp"
#include "coszero/zeros.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace coszero {

inline constexpr const char* kSchema = "coszero/1";

enum class Family { RandomSubset, Interval, ArithmeticProgression };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::RandomSubset: return "random-subset";
        case Family::Interval: return "interval";
        case Family::ArithmeticProgression: return "arithmetic-progression";
    }
    return "unknown";
}

inline Family parse_family(const std::string& s) {
    if (s == "random-subset") return Family::RandomSubset;
    if (s == "interval") return Family::Interval;
    if (s == "arithmetic-progression") return Family::ArithmeticProgression;
    throw std::invalid_argument("unknown family: " + s);
}

struct ExperimentRow {
    long trial = 0;
    long N = 0;  // |A|
    std::uint64_t seed = 0;
    long degree = 0;
    long distinct_zeros = 0;  // exact count, or certified lower bound on the fast path
    double zero_floor = 0;
    double mps_bound = 0;
    bool exact = false;
    double runtime_ms = 0;
    bool satisfied = true;
};

struct SweepOptions {
    Family family = Family::RandomSubset;
    long n_min = 1, n_max = 100;
    long trials = 10;
    std::uint64_t seed = 1;
    long universe = 0;          // random subsets of [0, universe]; 0 means 4N
    std::size_t grid = 0;       // fast-path grid; 0 means the next power of two >= 8 (deg + 1)
    long exact_max_degree = 300;
    bool timing = false;
    unsigned threads = 1;
    double time_budget_s = 0;   // 0: no cap
    long max_n = 1000000;
};

struct SweepResult {
    std::vector<ExperimentRow> rows;
    long requested = 0;
    bool partial = false;
    bool all_satisfied = true;
};

namespace detail {

inline std::size_t grid_for(long degree, std::size_t requested) {
    const std::size_t need = 4 * static_cast<std::size_t>(std::max(1L, degree));
    if (requested) {
        if (requested < need) throw std::invalid_argument("grid " + std::to_string(requested) + " is below 4 * degree = " + std::to_string(need));
        return requested;
    }
    std::size_t m = 1024;
    while (m < 2 * need) m <<= 1;
    return m;
}

/// N distinct integers from [0, U], Floyd's sampling, sorted.
inline std::vector<long> sample_subset(long N, long U, std::mt19937_64& rng) {
    if (N > U + 1) throw std::invalid_argument("cannot draw " + std::to_string(N) + " distinct elements from [0, " + std::to_string(U) + "]");
    std::set<long> s;
    for (long j = U + 1 - N; j <= U; ++j) {
        const long t = static_cast<long>(rng() % static_cast<std::uint64_t>(j + 1));
        if (!s.insert(t).second) s.insert(j);
    }
    return {s.begin(), s.end()};
}

inline std::vector<long> family_set(Family fam, long N, long universe, std::mt19937_64& rng) {
    std::vector<long> A;
    switch (fam) {
        case Family::RandomSubset: return sample_subset(N, universe > 0 ? std::max(universe, N - 1) : 4 * N, rng);
        case Family::Interval:
            for (long a = 0; a < N; ++a) A.push_back(a);
            return A;
        case Family::ArithmeticProgression: {
            const long a0 = static_cast<long>(rng() % 11), step = 1 + static_cast<long>(rng() % 10);
            for (long j = 0; j < N; ++j) A.push_back(a0 + j * step);
            return A;
        }
    }
    return A;
}

struct ZeroCount {
    long zeros = 0;
    bool exact = false;
};

inline ZeroCount count_for_sweep(const CosinePolynomial& f, long exact_max_degree, std::size_t grid) {
    if (f.degree() <= exact_max_degree) return {count_distinct_zeros(f).distinct_zero_count, true};
    return {count_zeros_fast(f, grid_for(f.degree(), grid)).lower_bound, false};
}

}  // namespace detail

inline ExperimentRow run_trial(const SweepOptions& opt, long trial) {
    auto rng = stream_rng(opt.seed, static_cast<std::uint64_t>(trial));
    long N = opt.n_min;
    if (opt.n_max > opt.n_min) {
        // log-uniform in [n_min, n_max]
        std::uniform_real_distribution<double> U(std::log(static_cast<double>(opt.n_min)), std::log(static_cast<double>(opt.n_max) + 1));
        N = std::clamp(static_cast<long>(std::exp(U(rng))), opt.n_min, opt.n_max);
    }
    const auto A = detail::family_set(opt.family, N, opt.universe, rng);
    const auto f = CosinePolynomial::from_set(A);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentRow row;
    row.trial = trial;
    row.N = N;
    row.seed = opt.seed;
    row.degree = f.degree();
    const auto c = detail::count_for_sweep(f, opt.exact_max_degree, opt.grid);
    row.distinct_zeros = c.zeros;
    row.exact = c.exact;
    row.zero_floor = subset_zero_bound(N).value;
    row.mps_bound = mps_bound_down(f);
    row.satisfied = static_cast<double>(row.distinct_zeros) >= row.zero_floor;
    if (opt.timing) row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

/// Deterministic in the seed: trial i draws from stream_rng(seed, i), and rows
/// are sorted by (N, trial) whatever the thread count.
inline SweepResult sweep(const SweepOptions& opt) {
    if (opt.n_min < 1 || opt.n_max < opt.n_min) throw std::invalid_argument("sweep: need 1 <= n_min <= n_max");
    if (opt.n_max > opt.max_n) throw std::invalid_argument("sweep: N beyond the fast-path limit " + std::to_string(opt.max_n));
    if (opt.trials < 0) throw std::invalid_argument("sweep: negative trial count");
    SweepResult res;
    res.requested = opt.trials;
    std::vector<std::optional<ExperimentRow>> slots(static_cast<std::size_t>(opt.trials));
    std::atomic<long> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto start = std::chrono::steady_clock::now();
    auto worker = [&] {
        for (;;) {
            if (stop) return;
            if (opt.time_budget_s > 0 &&
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > opt.time_budget_s) {
                stop = true;
                return;
            }
            const long i = next++;
            if (i >= opt.trials) return;
            try {
                slots[static_cast<std::size_t>(i)] = run_trial(opt, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                stop = true;
                return;
            }
        }
    };
    const unsigned n = std::max(1u, opt.threads);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& s : slots)
        if (s) res.rows.push_back(*s);
    res.partial = static_cast<long>(res.rows.size()) < opt.trials;
    std::sort(res.rows.begin(), res.rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
        return a.N != b.N ? a.N < b.N : a.trial < b.trial;
    });
    for (const auto& r : res.rows) res.all_satisfied = res.all_satisfied && r.satisfied;
    return res;
}

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// RFC 4180, CRLF line ends; a partial run ends with a "# partial" line.
inline std::string sweep_csv(const SweepResult& res) {
    std::string out = "schema,trial,N,seed,degree,distinct_zeros,zero_floor,mps_bound,method,runtime_ms,satisfied\r\n";
    for (const auto& r : res.rows) {
        out += std::string(kSchema) + "," + std::to_string(r.trial) + "," + std::to_string(r.N) + "," + std::to_string(r.seed) + "," +
               std::to_string(r.degree) + "," + std::to_string(r.distinct_zeros) + "," + format_double(r.zero_floor) + "," +
               format_double(r.mps_bound) + "," + (r.exact ? "exact" : "fast") + "," + format_double(r.runtime_ms) + "," +
               (r.satisfied ? "true" : "false") + "\r\n";
    }
    if (res.partial)
        out += "# partial: resource cap reached after " + std::to_string(res.rows.size()) + " of " + std::to_string(res.requested) +
               " trials\r\n";
    return out;
}

inline std::string sweep_plot_data(const SweepResult& res) {
    std::string out = "# N distinct_zeros\n";
    for (const auto& r : res.rows) out += std::to_string(r.N) + " " + std::to_string(r.distinct_zeros) + "\n";
    return out;
}

// ---- search ----

enum class Strategy { Flip, Swap, Anneal };

inline std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Flip: return "flip";
        case Strategy::Swap: return "swap";
        case Strategy::Anneal: return "anneal";
    }
    return "unknown";
}

inline Strategy parse_strategy(const std::string& s) {
    if (s == "flip") return Strategy::Flip;
    if (s == "swap") return Strategy::Swap;
    if (s == "anneal") return Strategy::Anneal;
    throw std::invalid_argument("unknown strategy: " + s);
}

struct SearchOptions {
    long N = 2;
    long iterations = 1000;
    std::uint64_t seed = 1;
    Strategy strategy = Strategy::Flip;
    long universe = 0;               // A in [0, universe]; 0 means 2N
    std::size_t grid = 0;
    long exact_objective_max_degree = 64;  // below this the objective is the exact count
    long recount_max_degree = 2000;
    double t_start = 2.0, t_end = 0.01;  // annealing, geometric
};

struct SearchState {
    std::vector<long> A;
    long zeros = 0;
    std::vector<long> best;
    long best_zeros = 0;
    long iteration = 0;
    std::uint64_t seed = 0;
    long universe = 0;
    bool objective_exact = false;
    long accepted = 0;
    std::optional<long> exact_recount;
    std::vector<long> best_trace;  // best_zeros after each iteration
};

inline SearchState search_min_zeros(const SearchOptions& opt) {
    if (opt.N < 2) throw std::invalid_argument("search: need N >= 2");
    if (opt.iterations < 0) throw std::invalid_argument("search: negative iteration count");
    SearchState st;
    st.seed = opt.seed;
    st.universe = opt.universe > 0 ? opt.universe : 2 * opt.N;
    if (st.universe < opt.N - 1) throw std::invalid_argument("search: universe smaller than N");
    st.objective_exact = st.universe <= opt.exact_objective_max_degree;
    const std::size_t m = detail::grid_for(st.universe, opt.grid);
    auto objective = [&](const std::vector<long>& A) {
        const auto f = CosinePolynomial::from_set(A);
        return st.objective_exact ? count_distinct_zeros(f).distinct_zero_count : count_zeros_fast(f, m).lower_bound;
    };
    auto rng = stream_rng(opt.seed, 0);
    st.A = detail::sample_subset(opt.N, st.universe, rng);
    st.zeros = objective(st.A);
    st.best = st.A;
    st.best_zeros = st.zeros;
    const bool movable = st.universe + 1 > opt.N;
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    for (long it = 0; it < opt.iterations; ++it) {
        st.iteration = it + 1;
        if (movable) {
            std::vector<long> B = st.A;
            const std::size_t i = static_cast<std::size_t>(rng() % B.size());
            bool moved = false;
            if (opt.strategy == Strategy::Swap) {
                // shift one element to a free neighbour
                const long a = B[i] + ((rng() & 1) ? 1 : -1);
                if (a >= 0 && a <= st.universe && !std::binary_search(B.begin(), B.end(), a)) {
                    B[i] = a;
                    moved = true;
                }
            } else {
                // paired flip: drop one element, add a free one
                const long free_count = st.universe + 1 - opt.N;
                long k = static_cast<long>(rng() % static_cast<std::uint64_t>(free_count));
                long a = 0;
                for (long v : B) {
                    if (v - a > k) break;
                    k -= v - a;
                    a = v + 1;
                }
                B[i] = a + k;
                moved = true;
            }
            if (moved) {
                std::sort(B.begin(), B.end());
                const long z = objective(B);
                bool accept = z <= st.zeros;
                if (opt.strategy == Strategy::Anneal && !accept) {
                    const double frac = opt.iterations > 1 ? static_cast<double>(it) / static_cast<double>(opt.iterations - 1) : 1.0;
                    const double T = opt.t_start * std::pow(opt.t_end / opt.t_start, frac);
                    accept = U01(rng) < std::exp(-static_cast<double>(z - st.zeros) / T);
                }
                if (accept) {
                    st.A = std::move(B);
                    st.zeros = z;
                    ++st.accepted;
                    if (z < st.best_zeros) {
                        st.best = st.A;
                        st.best_zeros = z;
                    }
                }
            }
        }
        st.best_trace.push_back(st.best_zeros);
    }
    if (st.best.back() <= opt.recount_max_degree)
        st.exact_recount = count_distinct_zeros(CosinePolynomial::from_set(st.best)).distinct_zero_count;
    return st;
}

struct ExhaustiveResult {
    long min_zeros = 0;
    std::vector<long> argmin;
    long subsets = 0;
};

/// Exact minimum of the distinct-zero count over all N-subsets of [0, U].
inline ExhaustiveResult exhaustive_min_zeros(long N, long U) {
    if (N < 1 || N > U + 1) throw std::invalid_argument("exhaustive: need 1 <= N <= U + 1");
    ExhaustiveResult out;
    out.min_zeros = -1;
    std::vector<long> A;
    std::function<void(long)> rec = [&](long from) {
        if (static_cast<long>(A.size()) == N) {
            ++out.subsets;
            const long z = count_distinct_zeros(CosinePolynomial::from_set(A)).distinct_zero_count;
            if (out.min_zeros < 0 || z < out.min_zeros) {
                out.min_zeros = z;
                out.argmin = A;
            }
            return;
        }
        for (long a = from; a <= U - (N - static_cast<long>(A.size())) + 1; ++a) {
            A.push_back(a);
            rec(a + 1);
            A.pop_back();
        }
    };
    rec(0);
    return out;
}

// ---- verification suites ----

struct SuiteResult {
    std::string name;
    bool passed = true;
    long cases = 0;
    std::string detail;
    std::string counterexample;  // first failing input
    double seconds = 0;
};

namespace detail {

inline std::string list_string(const std::vector<long>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

inline std::string list_string(const std::vector<Rational>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ",\"" : "\"") + to_string(v[i]) + "\"";
    return s + "]";
}

template <class F>
SuiteResult timed(const std::string& name, F&& body) {
    SuiteResult r;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline Rational small_rational(std::mt19937_64& rng) {
    Rational q(static_cast<long>(rng() % 11) - 5, 1 + static_cast<long>(rng() % 3));
    q.canonicalize();
    return q;
}

}  // namespace detail

/// |integral_J D_n| <= 10 for n <= n_max on random intervals J.
inline SuiteResult suite_dirichlet(long n_max, long trials, std::uint64_t seed) {
    return detail::timed("dirichlet", [&](SuiteResult& r) {
        auto rep = verify_dirichlet(n_max, trials, seed);
        r.cases = rep.pairs_checked;
        r.passed = rep.holds;
        r.detail = "max |integral| upper end " + format_double(rep.max_abs_upper) + " at n = " + std::to_string(rep.worst_n);
        if (!rep.holds)
            r.counterexample = "{\"n\":" + std::to_string(rep.worst_n) + ",\"a\":" + format_double(rep.worst_a) +
                               ",\"b\":" + format_double(rep.worst_b) + "}";
    });
}

/// S_k f vanishes on [N + deg S_k, M] when f^ has period p <= k on [N, M].
/// With inject_fault the product is perturbed and the suite must fail.
inline SuiteResult suite_killing(long cases, std::uint64_t seed, bool inject_fault = false) {
    return detail::timed("killing", [&](SuiteResult& r) {
        for (long c = 0; c < cases; ++c) {
            auto rng = stream_rng(seed, static_cast<std::uint64_t>(c));
            const long k = 1 + static_cast<long>(rng() % 6);
            const long p = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(k));
            std::vector<Rational> R;
            while (R.size() < 3) {
                Rational q = detail::small_rational(rng);
                if (std::find(R.begin(), R.end(), q) == R.end()) R.push_back(q);
            }
            std::vector<Rational> pat;
            for (long i = 0; i < p; ++i) pat.push_back(R[rng() % 3]);
            const long N = static_cast<long>(rng() % 5);
            const long M = N + sk_degree(k) + 5 + static_cast<long>(rng() % 20);
            std::map<long, Rational> coeffs;
            for (long r2 = N - 3; r2 < N; ++r2) coeffs[r2] = R[rng() % 3];
            for (long r2 = N; r2 <= M; ++r2) coeffs[r2] = pat[static_cast<std::size_t>((r2 - N) % p)];
            for (long r2 = M + 1; r2 <= M + 3; ++r2) coeffs[r2] = R[rng() % 3];
            KillingOptions ko;
            ko.inject_fault = inject_fault;
            ++r.cases;
            std::string failure;
            try {
                auto rep = killing_check(ExponentialPolynomial(coeffs), k, N, M, ko);
                if (!rep.verified) failure = "S_k f nonzero at index " + std::to_string(*rep.first_nonzero);
            } catch (const std::logic_error& e) {
                failure = e.what();
            }
            if (!failure.empty()) {
                r.passed = false;
                r.detail = "case " + std::to_string(c) + ": " + failure;
                r.counterexample = "{\"k\":" + std::to_string(k) + ",\"N\":" + std::to_string(N) + ",\"M\":" + std::to_string(M) +
                                   ",\"pattern\":" + detail::list_string(pat) + "}";
                return;
            }
        }
        r.detail = "all windows vanish exactly";
    });
}

/// Periodic sequences rebuilt exactly from their roots-of-unity expression.
inline SuiteResult suite_express(long cases, std::uint64_t seed) {
    return detail::timed("express-as-roots", [&](SuiteResult& r) {
        for (long c = 0; c < cases; ++c) {
            auto rng = stream_rng(seed, static_cast<std::uint64_t>(c));
            const long p = 1 + static_cast<long>(rng() % 6);
            const Rational u = detail::small_rational(rng);
            Rational w = detail::small_rational(rng);
            if (w == u) w += 1;
            RationalVector pat;
            for (long i = 0; i < p; ++i) pat.push_back((rng() & 1) ? u : w);
            // v = (X^p - 1) g with g of degree <= 1
            RationalVector g{detail::small_rational(rng)};
            if (rng() & 1) g.push_back(detail::small_rational(rng));
            if (g.back() == 0) g.back() = 1;
            RationalVector v(static_cast<std::size_t>(p) + g.size(), Rational(0));
            for (std::size_t j = 0; j < g.size(); ++j) {
                v[j] -= g[j];
                v[j + static_cast<std::size_t>(p)] += g[j];
            }
            const long t = static_cast<long>(v.size()) - 1;
            const long n = (1L << (t + 1)) + 3 * (t + 1) + 10;
            RationalVector x;
            for (long i = 0; i < n; ++i) x.push_back(pat[static_cast<std::size_t>(i % p)]);
            ++r.cases;
            auto e = express_as_roots(x, v);
            std::string failure;
            if (e.certification != "lemma-certified") failure = "not lemma-certified";
            for (long i = e.lo; i <= e.hi && failure.empty(); ++i) {
                std::optional<CycElement> s;
                for (const auto& term : e.terms) s = s ? *s + term.at(i) : term.at(i);
                const bool ok = s ? (s->is_rational() && s->to_rational() == x[static_cast<std::size_t>(i)]) : x[static_cast<std::size_t>(i)] == 0;
                if (!ok) failure = "reconstruction differs at index " + std::to_string(i);
            }
            if (!failure.empty()) {
                r.passed = false;
                r.detail = "case " + std::to_string(c) + ": " + failure;
                r.counterexample = "{\"pattern\":" + detail::list_string(pat) + ",\"kernel\":" + detail::list_string(v) + "}";
                return;
            }
        }
        r.detail = "exact reconstruction on every middle range";
    });
}

/// Kernel of Q -> rho^p Q(X + p) - Q(X) on degree <= d is the constants iff
/// rho^p = 1, and zero otherwise; every primitive rho of order q <= q_max.
inline SuiteResult suite_difference_kernel(long q_max, long p_max, long d_max) {
    return detail::timed("difference-kernel", [&](SuiteResult& r) {
        for (long q = 1; q <= q_max; ++q)
            for (long a = 0; a < q; ++a) {
                if (gcd_long(a, q) != 1) continue;
                for (long p = 1; p <= p_max; ++p)
                    for (long d = 0; d <= d_max; ++d) {
                        ++r.cases;
                        auto k = kernel_of_difference(RootOfUnity::make(q, a), p, d);
                        if (!k.agrees) {
                            r.passed = false;
                            r.detail = "dimension " + std::to_string(k.dimension) + ", predicted " + k.predicted;
                            r.counterexample = "{\"q\":" + std::to_string(q) + ",\"a\":" + std::to_string(a) + ",\"p\":" + std::to_string(p) +
                                               ",\"d\":" + std::to_string(d) + "}";
                            return;
                        }
                    }
            }
        r.detail = "kernel dimension matches the rho^p = 1 dichotomy";
    });
}

/// |x|_inf <= M^(n-1) n^(n/2) |b|_inf for random invertible +-1 systems.
inline SuiteResult suite_cramer(long cases, long n_max, std::uint64_t seed) {
    return detail::timed("cramer", [&](SuiteResult& r) {
        for (long c = 0; c < cases; ++c) {
            auto rng = stream_rng(seed, static_cast<std::uint64_t>(c));
            const std::size_t n = 1 + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n_max));
            IntegerMatrix A;
            do {
                A.assign(n, IntegerVector(n));
                for (auto& row : A)
                    for (auto& a : row) a = (rng() & 1) ? 1 : -1;
            } while (bareiss_determinant(A) == 0);
            RationalVector b;
            for (std::size_t i = 0; i < n; ++i) b.emplace_back(static_cast<long>(rng() % 41) - 20);
            ++r.cases;
            auto rep = cramer_bound_check(A, b, Rational(1));
            if (!rep.bound_ok) {
                r.passed = false;
                r.detail = "case " + std::to_string(c) + ": |x|_inf = " + to_string(rep.max_abs_x) + " above the bound";
                std::string m = "[";
                for (std::size_t i = 0; i < n; ++i) {
                    std::vector<long> row;
                    for (const auto& a : A[i]) row.push_back(a.get_si());
                    m += (i ? "," : "") + detail::list_string(row);
                }
                r.counterexample = "{\"A\":" + m + "],\"b\":" + detail::list_string(b) + "}";
                return;
            }
        }
        r.detail = "bound holds exactly";
    });
}

inline SuiteResult suite_euler_phi(long n_max) {
    return detail::timed("euler-phi", [&](SuiteResult& r) {
        auto rep = euler_phi_check(n_max);
        r.cases = rep.checked;
        r.passed = rep.holds;
        r.detail = "min phi(n) 8 log2 log2 n / n = " + format_double(rep.min_ratio) + " at n = " + std::to_string(rep.argmin);
        if (!rep.holds) r.counterexample = "{\"n\":" + std::to_string(rep.argmin) + "}";
    });
}

/// Distinct zeros on [0, 2 pi) from sign changes of a long-double grid on
/// (0, pi), doubling the grid until two consecutive counts agree; the
/// endpoints are decided exactly. Meant for polynomials with simple zeros.
inline long dense_grid_zero_count(const CosinePolynomial& f, std::size_t m0 = 1 << 12, std::size_t m_max = 1 << 22) {
    const int s0 = sgn(f.value_at_zero()), spi = sgn(f.value_at_pi());
    auto sign_of = [](long double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    auto count = [&](std::size_t m) {
        long changes = 0;
        int prev = s0;
        for (std::size_t j = 1; j <= m; ++j) {
            const int s = j == m ? spi : sign_of(clenshaw(f, std::numbers::pi_v<long double> * static_cast<long double>(j) / static_cast<long double>(m)));
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++changes;
            prev = s;
        }
        return 2 * changes + (s0 == 0 ? 1 : 0) + (spi == 0 ? 1 : 0);
    };
    long last = count(m0);
    for (std::size_t m = 2 * m0; m <= m_max; m *= 2) {
        const long c = count(m);
        if (c == last) return c;
        last = c;
    }
    return last;
}

inline SuiteResult suite_zero_oracle(long cases, long deg_max, std::uint64_t seed) {
    return detail::timed("zero-count-oracle", [&](SuiteResult& r) {
        for (long c = 0; c < cases; ++c) {
            auto rng = stream_rng(seed, static_cast<std::uint64_t>(c));
            CosinePolynomial f;
            do {
                const long d = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(deg_max));
                std::vector<Rational> co;
                for (long i = 0; i <= d; ++i) co.emplace_back(static_cast<long>(rng() % 19) - 9);
                if (co.back() == 0) co.back() = 1;
                f = CosinePolynomial(co);
            } while (!detail::chebyshev_squarefree(f.coeffs()));
            ++r.cases;
            const auto cert = count_distinct_zeros(f);
            const long grid = dense_grid_zero_count(f);
            if (cert.distinct_zero_count != grid) {
                r.passed = false;
                r.detail = "case " + std::to_string(c) + ": exact " + std::to_string(cert.distinct_zero_count) + " vs grid " + std::to_string(grid);
                r.counterexample = "{\"coeffs\":" + detail::list_string(f.coeffs()) + "}";
                return;
            }
        }
        r.detail = "exact and grid counts agree";
    });
}

inline SuiteResult suite_mps(long cases, long universe, std::uint64_t seed) {
    return detail::timed("mps", [&](SuiteResult& r) {
        double worst = INFINITY;
        for (long c = 0; c < cases; ++c) {
            auto rng = stream_rng(seed, static_cast<std::uint64_t>(c));
            const std::uint64_t density = 2 + rng() % 8;
            std::vector<long> A;
            for (long a = 0; a <= universe; ++a)
                if (rng() % density == 0) A.push_back(a);
            if (A.empty()) A.push_back(static_cast<long>(rng() % static_cast<std::uint64_t>(universe + 1)));
            ++r.cases;
            auto chk = mps_check(CosinePolynomial::from_set(A));
            worst = std::min(worst, chk.l1.lower / chk.bound.get_d());
            if (!chk.holds) {
                r.passed = false;
                r.detail = "case " + std::to_string(c) + ": L1 lower end " + format_double(chk.l1.lower) + " below " + to_string(chk.bound);
                r.counterexample = "{\"set\":" + detail::list_string(A) + "}";
                return;
            }
        }
        r.detail = "smallest L1 / bound ratio " + format_double(worst);
    });
}

inline SuiteResult suite_companion(long cases, long deg_max, std::size_t grid, std::uint64_t seed) {
    return detail::timed("companion", [&](SuiteResult& r) {
        double worst = INFINITY;
        for (long c = 0; c < cases; ++c) {
            auto rng = stream_rng(seed, static_cast<std::uint64_t>(c));
            const long d = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(deg_max));
            std::vector<Rational> co;
            for (long i = 0; i <= d; ++i) co.emplace_back(static_cast<long>(rng() % 11) - 5);
            if (co.back() == 0) co.back() = 1;
            CosinePolynomial f(co);
            ++r.cases;
            auto P = companion(f);
            double pscale = 0;
            for (double v : P.cheb) pscale += std::abs(v);
            const double scale = f.moment(0) * pscale;
            const double lo = companion_grid_minimum(f, P, grid);
            worst = std::min(worst, lo / scale);
            if (lo < -1e-9 * scale) {
                r.passed = false;
                r.detail = "case " + std::to_string(c) + ": min P f = " + format_double(lo) + ", scale " + format_double(scale);
                r.counterexample = "{\"coeffs\":" + detail::list_string(co) + "}";
                return;
            }
        }
        r.detail = "smallest min(P f) / scale " + format_double(worst);
    });
}

/// Synthetic structured forms: runs of periodic coefficients with short
/// junk between them, reduced with S_2. Checks measured zeros >= bound on
/// every form; with require_positive, also that each form's bound is
/// positive with Y > 0, which is what makes the check informative.
inline SuiteResult suite_structured(long forms, std::uint64_t seed, bool require_positive) {
    return detail::timed("structured", [&](SuiteResult& r) {
        long positive = 0;
        double best = -INFINITY;
        for (long c = 0; c < forms; ++c) {
            auto rng = stream_rng(seed, static_cast<std::uint64_t>(c));
            std::vector<Rational> co;
            const long blocks = 1 + static_cast<long>(rng() % 3);
            for (long k = 0; k < blocks; ++k) {
                for (int j = 0; j < 3; ++j) co.emplace_back(static_cast<long>(rng() % 3));
                const long p = 1 + static_cast<long>(rng() % 2);
                std::vector<long> pat;
                for (long i = 0; i < p; ++i) pat.push_back(2 * static_cast<long>(rng() % 3));
                const long len = 40 + static_cast<long>(rng() % 60);
                for (long j = 0; j < len; ++j) co.emplace_back(pat[static_cast<std::size_t>(j % p)]);
            }
            co.emplace_back(1);
            CosinePolynomial f(co);
            std::set<long> B;
            for (long x : (sk(2).exponential() * ExponentialPolynomial::from_cosine(f)).support())
                if (x >= 0) B.insert(x);
            auto s = reduce_to_structure(f, B, sk_degree(2), 10);
            Rational M = 0;
            long P = 1;
            for (const auto& b : s.blocks) {
                P = std::max(P, b.period);
                for (const auto& v : b.pattern) M = std::max(M, abs_value(v));
            }
            if (M == 0) M = 1;
            auto res = structured_zero_bound(s, M, P, s.error_sup_bound);
            ++r.cases;
            if (!res.bound.applicable) continue;
            best = std::max(best, res.bound.value);
            if (res.y > 0 && res.bound.value > 0) ++positive;
            const long zeros = count_distinct_zeros(f).distinct_zero_count;
            if (static_cast<double>(zeros) < res.bound.value) {
                r.passed = false;
                r.detail = "form " + std::to_string(c) + ": " + std::to_string(zeros) + " zeros below bound " + format_double(res.bound.value);
                r.counterexample = "{\"coeffs\":" + detail::list_string(co) + "}";
                return;
            }
        }
        r.detail = std::to_string(positive) + " of " + std::to_string(forms) + " forms have a positive bound (largest " + format_double(best) +
                   "); a positive bound needs log2 Y > (2^14 P^3 M l + 2^10 K P)(P^2 + 1), at least 32768";
        if (require_positive && positive < forms) r.passed = false;
    });
}

/// Random subsets with the zero count from the fast path; every row must
/// satisfy zeros >= the restricted zero floor.
inline SuiteResult suite_floor_sweep(long trials, long n_max, std::size_t grid, std::uint64_t seed) {
    return detail::timed("zero-floor-sweep", [&](SuiteResult& r) {
        SweepOptions opt;
        opt.family = Family::RandomSubset;
        opt.n_min = 1;
        opt.n_max = n_max;
        opt.trials = trials;
        opt.seed = seed;
        opt.grid = grid;
        opt.exact_max_degree = 0;
        auto res = sweep(opt);
        r.cases = static_cast<long>(res.rows.size());
        double top = 0;
        for (const auto& row : res.rows) {
            top = std::max(top, row.zero_floor);
            if (!row.satisfied) {
                r.passed = false;
                r.detail = "trial " + std::to_string(row.trial) + ": " + std::to_string(row.distinct_zeros) + " zeros below floor " +
                           format_double(row.zero_floor);
                r.counterexample = "{\"seed\":" + std::to_string(seed) + ",\"trial\":" + std::to_string(row.trial) + "}";
                return;
            }
        }
        r.detail = "largest floor " + format_double(top) + ", largest N " + std::to_string(res.rows.empty() ? 0 : res.rows.back().N);
    });
}

/// Wall time of the fast count at degree fast_degree and the exact count at
/// degree exact_degree, against the given limits.
inline SuiteResult suite_performance(long fast_degree, double fast_limit_s, long exact_degree, double exact_limit_s, std::uint64_t seed) {
    return detail::timed("performance", [&](SuiteResult& r) {
        auto rng = stream_rng(seed, 0);
        auto build = [&](long deg) {
            std::vector<long> A;
            for (long a = 0; a < deg; ++a)
                if (rng() & 1) A.push_back(a);
            A.push_back(deg);
            return CosinePolynomial::from_set(A);
        };
        const auto f = build(fast_degree), g = build(exact_degree);
        auto t0 = std::chrono::steady_clock::now();
        const auto fast = count_zeros_fast(f, detail::grid_for(fast_degree, 0) / 2);
        const double tf = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        t0 = std::chrono::steady_clock::now();
        const auto exact = count_distinct_zeros(g);
        const double te = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.cases = 2;
        r.passed = tf < fast_limit_s && te < exact_limit_s;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f s", tf);
        r.detail = "fast deg " + std::to_string(fast_degree) + ": " + buf + " (" + std::to_string(fast.lower_bound) + " zeros); ";
        std::snprintf(buf, sizeof buf, "%.2f s", te);
        r.detail += "exact deg " + std::to_string(exact_degree) + ": " + buf + " (" + std::to_string(exact.distinct_zero_count) + " zeros, " +
                    to_string(exact.method) + ")";
    });
}

enum class Scale { Quick, Full };

inline Scale parse_scale(const std::string& s) {
    if (s == "quick") return Scale::Quick;
    if (s == "full") return Scale::Full;
    throw std::invalid_argument("unknown scale: " + s);
}

struct VerifyOptions {
    std::uint64_t seed = 1;
    Scale scale = Scale::Quick;
    bool inject_killing_fault = false;
};

struct SuiteReport {
    std::uint64_t seed = 0;
    std::string scale;
    std::vector<SuiteResult> suites;
    bool passed = true;
};

inline SuiteReport verify_all(const VerifyOptions& opt) {
    const bool full = opt.scale == Scale::Full;
    SuiteReport rep;
    rep.seed = opt.seed;
    rep.scale = full ? "full" : "quick";
    const std::uint64_t s = opt.seed;
    rep.suites.push_back(suite_dirichlet(full ? 2000 : 200, full ? 1000 : 50, s));
    rep.suites.push_back(suite_killing(full ? 200 : 50, s, opt.inject_killing_fault));
    rep.suites.push_back(suite_express(full ? 200 : 40, s));
    rep.suites.push_back(suite_difference_kernel(12, 12, full ? 6 : 3));
    rep.suites.push_back(suite_cramer(full ? 500 : 100, 8, s));
    rep.suites.push_back(suite_euler_phi(full ? 1000000 : 100000));
    rep.suites.push_back(suite_zero_oracle(full ? 100 : 25, 40, s));
    rep.suites.push_back(suite_mps(full ? 100 : 10, 200, s));
    rep.suites.push_back(suite_companion(full ? 100 : 20, 30, full ? 100000 : 20000, s));
    rep.suites.push_back(suite_structured(full ? 50 : 10, s, false));
    rep.suites.push_back(suite_floor_sweep(full ? 100 : 20, full ? 100000 : 5000, full ? (1u << 21) : (1u << 17), s));
    for (const auto& r : rep.suites) rep.passed = rep.passed && r.passed;
    return rep;
}

}  // namespace coszero
