#pragma once

// Minimal RAII handle over mpfr_t plus the enclosure helpers used by the
// rigorous evaluators.

#include "coszero/rational.hpp"

#include <mpfr.h>

#include <cmath>
#include <utility>

namespace coszero {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    Mpfr(mpfr_prec_t prec, double x) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Mpfr(const Mpfr& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }
    long double to_long_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_ld(v_, rnd); }

    void set(const Rational& q, mpfr_rnd_t rnd = MPFR_RNDN) { mpfr_set_q(v_, q.get_mpq_t(), rnd); }

private:
    mpfr_t v_;
};

/// pi * num / 2^e, correctly rounded to the handle's precision (up to one ulp).
inline void set_pi_dyadic(Mpfr& out, const Integer& num, unsigned long e) {
    Mpfr pi(out.prec() + 16);
    mpfr_const_pi(pi.get(), MPFR_RNDN);
    mpfr_mul_z(pi.get(), pi.get(), num.get_mpz_t(), MPFR_RNDN);
    mpfr_div_2ui(out.get(), pi.get(), e, MPFR_RNDN);
}

/// Upper bound on |x| as a double, rounded up.
inline double abs_up(const Mpfr& x) { return std::abs(mpfr_get_d(x.get(), MPFR_RNDA)); }

}  // namespace coszero
