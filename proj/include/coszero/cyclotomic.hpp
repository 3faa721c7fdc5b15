#pragma once

// Cyclotomic number fields Q(zeta_q), represented as residue polynomials
// modulo the q-th cyclotomic polynomial Phi_q with rational coefficients.

#include "coszero/qpoly.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace coszero {

inline long euler_phi(long n) {
    if (n < 1) throw std::invalid_argument("euler_phi: n must be positive");
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

inline long gcd_long(long a, long b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline long lcm_long(long a, long b) { return a / gcd_long(a, b) * b; }

/// Phi_q via X^q - 1 = prod_{d | q} Phi_d. Cached; thread-safe.
inline const QPoly& cyclotomic_polynomial(long q) {
    if (q < 1) throw std::invalid_argument("cyclotomic_polynomial: q must be positive");
    static std::mutex mu;
    static std::map<long, QPoly> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
    }
    QPoly num = QPoly::monomial(static_cast<std::size_t>(q)) - QPoly::constant(1);
    for (long d = 1; d < q; ++d) {
        if (q % d == 0) num = exact_quotient(num, cyclotomic_polynomial(d));
    }
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(q, std::move(num)).first->second;
}

class CyclotomicField;
using FieldPtr = std::shared_ptr<const CyclotomicField>;

class CyclotomicField : public std::enable_shared_from_this<CyclotomicField> {
public:
    /// Shared context for conductor q.
    static FieldPtr get(long q) {
        static std::mutex mu;
        static std::map<long, FieldPtr> cache;
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(q);
        if (it != cache.end()) return it->second;
        FieldPtr f(new CyclotomicField(q));
        cache.emplace(q, f);
        return f;
    }

    long conductor() const { return q_; }
    std::size_t dimension() const { return static_cast<std::size_t>(phi_); }
    const QPoly& modulus() const { return modulus_; }

    /// Reduces an arbitrary coefficient vector (in zeta) modulo Phi_q.
    std::vector<Rational> reduce(std::vector<Rational> t) const {
        const std::size_t n = dimension();
        const auto& m = modulus_.coeffs();
        for (std::size_t k = t.size(); k-- > n;) {
            if (t[k] == 0) continue;
            Rational c = t[k];
            for (std::size_t j = 0; j < n; ++j)
                if (m[j] != 0) t[k - n + j] -= c * m[j];
            t[k] = 0;
        }
        t.resize(n, Rational(0));
        return t;
    }

    /// Coordinates of zeta^a for any integer a.
    const std::vector<Rational>& power(long a) const {
        long e = ((a % q_) + q_) % q_;
        std::lock_guard<std::mutex> lock(power_mu_);
        auto it = powers_.find(e);
        if (it != powers_.end()) return it->second;
        std::vector<Rational> t(static_cast<std::size_t>(e) + 1, Rational(0));
        t[static_cast<std::size_t>(e)] = 1;
        return powers_.emplace(e, reduce(std::move(t))).first->second;
    }

private:
    explicit CyclotomicField(long q) : q_(q), phi_(euler_phi(q)), modulus_(cyclotomic_polynomial(q)) {}
    long q_;
    long phi_;
    QPoly modulus_;
    mutable std::mutex power_mu_;
    mutable std::map<long, std::vector<Rational>> powers_;
};

/// An element of Q(zeta_q).
class CycElement {
public:
    CycElement() : CycElement(CyclotomicField::get(1)) {}
    explicit CycElement(FieldPtr field) : field_(std::move(field)), c_(field_->dimension(), Rational(0)) {}
    CycElement(FieldPtr field, const Rational& r) : CycElement(std::move(field)) { c_[0] = r; }
    CycElement(FieldPtr field, std::vector<Rational> coords) : field_(std::move(field)), c_(field_->reduce(std::move(coords))) {}

    static CycElement root_of_unity(const FieldPtr& field, long a) { return CycElement(field, field->power(a), raw_tag{}); }

    const FieldPtr& field() const { return field_; }
    long conductor() const { return field_->conductor(); }
    const std::vector<Rational>& coords() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    Rational to_rational() const {
        if (!is_rational()) throw std::domain_error("cyclotomic element is not rational");
        return c_[0];
    }

    std::complex<double> to_complex() const {
        const double q = static_cast<double>(conductor());
        std::complex<double> acc = 0;
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / q;
            acc += c_[j].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return acc;
    }

    /// Complex conjugate (zeta -> zeta^{-1}).
    CycElement conj() const {
        std::vector<Rational> t(c_.size(), Rational(0));
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            const auto& p = field_->power(-static_cast<long>(j));
            for (std::size_t i = 0; i < t.size(); ++i)
                if (p[i] != 0) t[i] += c_[j] * p[i];
        }
        return CycElement(field_, std::move(t), raw_tag{});
    }
    CycElement real_part() const { return (*this + conj()) * Rational(1, 2); }

    /// Image under Q(zeta_q) -> Q(zeta_L) for q | L.
    CycElement lift(const FieldPtr& target) const {
        const long q = conductor(), L = target->conductor();
        if (L % q != 0) throw std::invalid_argument("lift: conductor does not divide target");
        if (L == q) return *this;
        std::vector<Rational> t(target->dimension(), Rational(0));
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            const auto& p = target->power(static_cast<long>(j) * (L / q));
            for (std::size_t i = 0; i < t.size(); ++i)
                if (p[i] != 0) t[i] += c_[j] * p[i];
        }
        return CycElement(target, std::move(t), raw_tag{});
    }

    friend CycElement operator+(const CycElement& a, const CycElement& b) {
        auto [x, y] = common(a, b);
        for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
        return x;
    }
    friend CycElement operator-(const CycElement& a, const CycElement& b) {
        auto [x, y] = common(a, b);
        for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] -= y.c_[i];
        return x;
    }
    CycElement operator-() const {
        CycElement r(*this);
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend CycElement operator*(const CycElement& a, const Rational& s) {
        CycElement r(a);
        for (auto& v : r.c_) v *= s;
        return r;
    }
    friend CycElement operator*(const CycElement& a, const CycElement& b) {
        auto [x, y] = common(a, b);
        const std::size_t n = x.c_.size();
        if (n == 1) {
            x.c_[0] *= y.c_[0];
            return x;
        }
        std::vector<Rational> t(2 * n - 1, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            if (x.c_[i] == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (y.c_[j] != 0) t[i + j] += x.c_[i] * y.c_[j];
        }
        return CycElement(x.field_, x.field_->reduce(std::move(t)), raw_tag{});
    }
    CycElement& operator+=(const CycElement& b) { return *this = *this + b; }
    CycElement& operator-=(const CycElement& b) { return *this = *this - b; }
    CycElement& operator*=(const CycElement& b) { return *this = *this * b; }

    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_q.
    CycElement inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero in cyclotomic field");
        if (c_.size() == 1) return CycElement(field_, 1 / c_[0]);
        QPoly r0 = field_->modulus(), r1(c_);
        QPoly s0, s1 = QPoly::constant(1);
        while (!r1.is_zero()) {
            auto [quo, rem] = divmod(r0, r1);
            QPoly s2 = s0 - quo * s1;
            r0 = std::move(r1);
            r1 = std::move(rem);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant because Phi_q is irreducible.
        if (r0.degree() != 0) throw std::logic_error("cyclotomic modulus not coprime");
        QPoly inv = (1 / r0.lead()) * s0;
        return CycElement(field_, inv.coeffs());
    }
    friend CycElement operator/(const CycElement& a, const CycElement& b) { return a * b.inverse(); }

    CycElement pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        CycElement result(field_, Rational(1)), base(*this);
        while (e > 0) {
            if (e & 1) result *= base;
            base *= base;
            e >>= 1;
        }
        return result;
    }

    friend bool operator==(const CycElement& a, const CycElement& b) {
        auto [x, y] = common(a, b);
        return x.c_ == y.c_;
    }

private:
    struct raw_tag {};
    CycElement(FieldPtr field, std::vector<Rational> coords, raw_tag) : field_(std::move(field)), c_(std::move(coords)) {}

    static std::pair<CycElement, CycElement> common(const CycElement& a, const CycElement& b) {
        if (a.conductor() == b.conductor()) return {a, b};
        FieldPtr L = CyclotomicField::get(lcm_long(a.conductor(), b.conductor()));
        return {a.lift(L), b.lift(L)};
    }

    FieldPtr field_;
    std::vector<Rational> c_;
};

}  // namespace coszero
