#pragma once

// Grid evaluation of cosine polynomials at t_j = 2 pi j / m: FFTW in double
// or long double, MPFR direct summation above 64 bits, and Clenshaw for
// pointwise checks.

#include "coszero/mpfr.hpp"
#include "coszero/polynomial.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace coszero {

/// Working mantissa bits; COSZERO_PRECISION overrides the default of 53.
inline int default_precision() {
    if (const char* env = std::getenv("COSZERO_PRECISION")) {
        try {
            int p = std::stoi(env);
            if (p >= 24 && p <= 4096) return p;
        } catch (const std::exception&) {
        }
    }
    return 53;
}

struct GridEvaluation {
    std::size_t m = 0;
    std::vector<long double> values;  // f(2 pi j / m), j = 0..m-1
    int precision = 53;
    /// Documented contract: 2^-(precision/2) * sum |C_r|.
    double error_bound = 0;
    /// Tighter a-priori bound for the chosen evaluator (FFT roundoff model).
    double roundoff_bound = 0;
};

namespace detail {

// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex mu;
    return mu;
}

template <class Real>
std::vector<Real> folded_coefficients(const CosinePolynomial& f, std::size_t m) {
    std::vector<Real> x(m, Real(0));
    const auto& c = f.coeffs();
    for (std::size_t r = 0; r < c.size(); ++r) {
        if (c[r] == 0) continue;
        x[r % m] += static_cast<Real>(c[r].get_d());
        if constexpr (sizeof(Real) > sizeof(double)) {
            // refine with the low part of the rational for long double
            Rational rest = c[r] - Rational(c[r].get_d());
            x[r % m] += static_cast<Real>(rest.get_d());
        }
    }
    return x;
}

inline double l2_norm(const std::vector<double>& x) {
    long double s = 0;
    for (double v : x) s += static_cast<long double>(v) * v;
    return static_cast<double>(std::sqrt(s));
}

inline double fft_roundoff(std::size_t m, double l2, double abs_sum, double unit, std::size_t n) {
    const double lg = std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(m, 2))));
    const double folds = std::ceil(static_cast<double>(n + 1) / static_cast<double>(m));
    return 1.1 * unit * ((5 * lg + 2) * std::sqrt(static_cast<double>(m)) * l2 + (folds + 2) * abs_sum);
}

}  // namespace detail

/// Real parts of the length-m DFT of the folded coefficients, in double.
inline std::vector<double> fft_cosine_values(const CosinePolynomial& f, std::size_t m) {
    std::vector<double> x = detail::folded_coefficients<double>(f, m);
    std::vector<double> out(m);
    fftw_complex* y = fftw_alloc_complex(m / 2 + 1);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), x.data(), y, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    for (std::size_t j = 0; j <= m / 2; ++j) {
        out[j] = y[j][0];
        if (j != 0) out[m - j] = y[j][0];
    }
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(y);
    return out;
}

/// A-priori roundoff bound for fft_cosine_values.
inline double fft_roundoff_bound(const CosinePolynomial& f, std::size_t m) {
    std::vector<double> x = detail::folded_coefficients<double>(f, m);
    return detail::fft_roundoff(m, detail::l2_norm(x), f.moment(0), std::ldexp(1.0, -53),
                                static_cast<std::size_t>(std::max(0L, f.degree())));
}

inline std::vector<long double> fftl_cosine_values(const CosinePolynomial& f, std::size_t m) {
    std::vector<long double> x = detail::folded_coefficients<long double>(f, m);
    std::vector<long double> out(m);
    fftwl_complex* y = fftwl_alloc_complex(m / 2 + 1);
    fftwl_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        plan = fftwl_plan_dft_r2c_1d(static_cast<int>(m), x.data(), y, FFTW_ESTIMATE);
    }
    fftwl_execute(plan);
    for (std::size_t j = 0; j <= m / 2; ++j) {
        out[j] = y[j][0];
        if (j != 0) out[m - j] = y[j][0];
    }
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftwl_destroy_plan(plan);
    }
    fftwl_free(y);
    return out;
}

/// Clenshaw summation in long double at an arbitrary angle.
inline long double clenshaw(const CosinePolynomial& f, long double theta) {
    const auto& c = f.coeffs();
    if (c.empty()) return 0;
    const long double x = std::cos(theta);
    long double b1 = 0, b2 = 0;
    for (std::size_t k = c.size() - 1; k >= 1; --k) {
        long double b = static_cast<long double>(c[k].get_d()) + 2 * x * b1 - b2;
        b2 = b1;
        b1 = b;
    }
    return static_cast<long double>(c[0].get_d()) + x * b1 - b2;
}

inline GridEvaluation eval_grid(const CosinePolynomial& f, std::size_t m, int precision = default_precision()) {
    if (m == 0) throw std::invalid_argument("eval_grid: m must be positive");
    GridEvaluation g;
    g.m = m;
    g.precision = precision;
    const double abs_sum = f.moment(0);
    g.error_bound = std::ldexp(abs_sum, -(precision / 2));
    const std::size_t n = static_cast<std::size_t>(std::max(0L, f.degree()));
    if (precision <= 53) {
        auto v = fft_cosine_values(f, m);
        g.values.assign(v.begin(), v.end());
        g.roundoff_bound = fft_roundoff_bound(f, m);
    } else if (precision <= 64) {
        g.values = fftl_cosine_values(f, m);
        auto x = detail::folded_coefficients<double>(f, m);
        g.roundoff_bound = detail::fft_roundoff(m, detail::l2_norm(x), abs_sum, std::ldexp(1.0, -64), n);
    } else {
        // direct summation against a cosine table: cos(2 pi (j r mod m) / m)
        const mpfr_prec_t prec = precision + 32;
        std::vector<Mpfr> table;
        table.reserve(m);
        Mpfr angle(prec);
        for (std::size_t k = 0; k < m; ++k) {
            set_pi_dyadic(angle, Integer(static_cast<unsigned long>(2 * k)), 0);
            mpfr_div_ui(angle.get(), angle.get(), static_cast<unsigned long>(m), MPFR_RNDN);
            Mpfr c(prec);
            mpfr_cos(c.get(), angle.get(), MPFR_RNDN);
            table.push_back(std::move(c));
        }
        std::vector<Mpfr> coeff;
        for (const auto& q : f.coeffs()) {
            Mpfr c(prec);
            c.set(q);
            coeff.push_back(std::move(c));
        }
        g.values.resize(m);
        Mpfr acc(prec), term(prec);
        for (std::size_t j = 0; j < m; ++j) {
            mpfr_set_zero(acc.get(), 1);
            for (std::size_t r = 0; r < coeff.size(); ++r) {
                if (mpfr_zero_p(coeff[r].get())) continue;
                const std::size_t idx = static_cast<std::size_t>((static_cast<unsigned __int128>(j) * r) % m);
                mpfr_mul(term.get(), coeff[r].get(), table[idx].get(), MPFR_RNDN);
                mpfr_add(acc.get(), acc.get(), term.get(), MPFR_RNDN);
            }
            g.values[j] = acc.to_long_double();
        }
        g.roundoff_bound = std::ldexp(abs_sum, -64) + std::ldexp(abs_sum * static_cast<double>(n + 4), -precision);
    }
    return g;
}

}  // namespace coszero
