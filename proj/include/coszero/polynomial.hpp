#pragma once

// Cosine polynomials f(t) = sum_{r=0}^n C_r cos(r t) with rational
// coefficients, exponential polynomials sum_r a_r e^{i r t} over cyclotomic
// fields, and coefficient-set statistics.

#include "coszero/chebyshev.hpp"
#include "coszero/cyclotomic.hpp"
#include "coszero/rational.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace coszero {

struct CoefficientStats {
    Rational M;     // max |x|
    Integer D;      // lcm of reduced denominators
    std::size_t cardinality;
};

class CoefficientSet {
public:
    CoefficientSet(std::initializer_list<Rational> xs) : CoefficientSet(std::vector<Rational>(xs)) {}
    explicit CoefficientSet(const std::vector<Rational>& xs) {
        for (const auto& x : xs) elems_.insert(x);
        if (elems_.empty()) throw std::invalid_argument("coefficient set must be non-empty");
    }
    const std::set<Rational>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool contains(const Rational& x) const { return elems_.count(x) != 0; }

private:
    std::set<Rational> elems_;
};

inline CoefficientStats coefficient_stats(const CoefficientSet& R) {
    CoefficientStats s{Rational(0), Integer(1), R.size()};
    for (const auto& x : R.elements()) {
        Rational a = abs_value(x);
        if (a > s.M) s.M = a;
        s.D = lcm(s.D, x.get_den());
    }
    return s;
}

class CosinePolynomial {
public:
    CosinePolynomial() = default;
    explicit CosinePolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    /// f_A(t) = sum_{a in A} cos(a t).
    static CosinePolynomial from_set(const std::vector<long>& A) {
        long top = -1;
        for (long a : A) {
            if (a < 0) throw std::invalid_argument("frequency set must be non-negative");
            top = std::max(top, a);
        }
        std::vector<Rational> c(static_cast<std::size_t>(top + 1), Rational(0));
        for (long a : A) {
            if (c[static_cast<std::size_t>(a)] != 0) throw std::invalid_argument("frequency set must be distinct");
            c[static_cast<std::size_t>(a)] = 1;
        }
        return CosinePolynomial(std::move(c));
    }

    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t r) const { return r < c_.size() ? c_[r] : Rational(0); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }

    Rational value_at_zero() const {
        Rational s = 0;
        for (const auto& x : c_) s += x;
        return s;
    }
    Rational value_at_pi() const {
        Rational s = 0;
        for (std::size_t r = 0; r < c_.size(); ++r) s += (r % 2 ? -c_[r] : c_[r]);
        return s;
    }

    /// Clenshaw evaluation in double precision.
    double eval(double theta) const {
        if (c_.empty()) return 0.0;
        const double x = std::cos(theta);
        double b1 = 0, b2 = 0;
        for (std::size_t k = c_.size() - 1; k >= 1; --k) {
            double b = c_[k].get_d() + 2 * x * b1 - b2;
            b2 = b1;
            b1 = b;
        }
        return c_[0].get_d() + x * b1 - b2;
    }

    /// sum_r |C_r| r^k as a double (used for derivative and error bounds).
    double moment(int k) const {
        double s = 0;
        for (std::size_t r = 0; r < c_.size(); ++r) s += std::abs(c_[r].get_d()) * std::pow(static_cast<double>(r), k);
        return s;
    }
    Rational abs_sum() const {
        Rational s = 0;
        for (const auto& x : c_) s += abs_value(x);
        return s;
    }

    /// Distinct coefficient values C_0..C_n.
    CoefficientSet observed_values() const {
        if (c_.empty()) return CoefficientSet{Rational(0)};
        return CoefficientSet(c_);
    }

    friend CosinePolynomial operator+(const CosinePolynomial& a, const CosinePolynomial& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return CosinePolynomial(std::move(c));
    }
    friend CosinePolynomial operator-(const CosinePolynomial& a, const CosinePolynomial& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
        return CosinePolynomial(std::move(c));
    }
    friend CosinePolynomial operator*(const Rational& s, const CosinePolynomial& a) {
        std::vector<Rational> c(a.c_);
        for (auto& x : c) x *= s;
        return CosinePolynomial(std::move(c));
    }
    /// Product via cos(a t) cos(b t) = (cos((a+b)t) + cos((a-b)t)) / 2.
    friend CosinePolynomial operator*(const CosinePolynomial& a, const CosinePolynomial& b) {
        return CosinePolynomial(cheb_multiply(a.c_, b.c_));
    }
    friend bool operator==(const CosinePolynomial& a, const CosinePolynomial& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// g with g(cos t) = f(t), exact.
inline QPoly to_algebraic(const CosinePolynomial& f) { return cheb_to_monomial(f.coeffs()); }

/// Finitely supported sum_r a_r e^{i r t}, coefficients in Q(zeta_q).
class ExponentialPolynomial {
public:
    ExponentialPolynomial() : field_(CyclotomicField::get(1)) {}
    explicit ExponentialPolynomial(long conductor) : field_(CyclotomicField::get(conductor)) {}
    ExponentialPolynomial(const std::map<long, Rational>& coeffs) : field_(CyclotomicField::get(1)) {
        for (const auto& [r, a] : coeffs) set(r, CycElement(field_, a));
    }

    /// Embedding of a cosine polynomial: a_0 = C_0, a_{+-r} = C_r / 2.
    static ExponentialPolynomial from_cosine(const CosinePolynomial& f) {
        ExponentialPolynomial e;
        const auto& c = f.coeffs();
        for (std::size_t r = 0; r < c.size(); ++r) {
            if (c[r] == 0) continue;
            if (r == 0) {
                e.set(0, c[0]);
            } else {
                e.set(static_cast<long>(r), c[r] / 2);
                e.set(-static_cast<long>(r), c[r] / 2);
            }
        }
        return e;
    }
    /// e^{i k t}.
    static ExponentialPolynomial monomial(long k, const Rational& a = 1) {
        ExponentialPolynomial e;
        e.set(k, a);
        return e;
    }

    long conductor() const { return field_->conductor(); }
    const FieldPtr& field() const { return field_; }
    const std::map<long, CycElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::vector<long> support() const {
        std::vector<long> s;
        for (const auto& [r, a] : terms_) s.push_back(r);
        return s;
    }
    long min_frequency() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    long max_frequency() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    CycElement coefficient(long r) const {
        auto it = terms_.find(r);
        return it == terms_.end() ? CycElement(field_) : it->second;
    }
    Rational rational_coefficient(long r) const { return coefficient(r).to_rational(); }

    void set(long r, const CycElement& a) {
        if (a.conductor() != conductor() && conductor() % a.conductor() != 0)
            relift(CyclotomicField::get(lcm_long(a.conductor(), conductor())));
        CycElement v = a.conductor() == conductor() ? a : a.lift(field_);
        if (v.is_zero())
            terms_.erase(r);
        else
            terms_[r] = std::move(v);
    }
    void set(long r, const Rational& a) { set(r, CycElement(field_, a)); }

    /// Re-expresses all coefficients in a larger cyclotomic field.
    void relift(const FieldPtr& target) {
        if (target->conductor() == conductor()) return;
        for (auto& [r, a] : terms_) a = a.lift(target);
        field_ = target;
    }

    /// True when every coefficient lies in Q.
    bool is_rational() const {
        for (const auto& [r, a] : terms_)
            if (!a.is_rational()) return false;
        return true;
    }

    /// sum_r a_r: the value at t = 0.
    CycElement value_at_zero() const {
        CycElement s(field_);
        for (const auto& [r, a] : terms_) s += a;
        return s;
    }

    std::complex<double> eval(double theta) const {
        std::complex<double> s = 0;
        for (const auto& [r, a] : terms_)
            s += a.to_complex() * std::polar(1.0, static_cast<double>(r) * theta);
        return s;
    }

    /// Back to a cosine polynomial; requires rational coefficients with a_r = a_{-r}.
    CosinePolynomial to_cosine() const {
        if (terms_.empty()) return {};
        long top = std::max(std::abs(min_frequency()), std::abs(max_frequency()));
        std::vector<Rational> c(static_cast<std::size_t>(top + 1), Rational(0));
        for (const auto& [r, a] : terms_) {
            Rational v = a.to_rational();
            if (coefficient(-r) != a) throw std::domain_error("exponential polynomial is not even");
            if (r == 0)
                c[0] = v;
            else if (r > 0)
                c[static_cast<std::size_t>(r)] = 2 * v;
        }
        return CosinePolynomial(std::move(c));
    }

    friend ExponentialPolynomial operator+(const ExponentialPolynomial& a, const ExponentialPolynomial& b) {
        ExponentialPolynomial out = a;
        out.align(b);
        for (const auto& [r, v] : b.terms_) out.set(r, out.coefficient(r) + v.lift(out.field_));
        return out;
    }
    friend ExponentialPolynomial operator-(const ExponentialPolynomial& a, const ExponentialPolynomial& b) {
        ExponentialPolynomial out = a;
        out.align(b);
        for (const auto& [r, v] : b.terms_) out.set(r, out.coefficient(r) - v.lift(out.field_));
        return out;
    }
    friend ExponentialPolynomial operator*(const ExponentialPolynomial& a, const CycElement& s) {
        ExponentialPolynomial out = a;
        if (s.conductor() != out.conductor())
            out.relift(CyclotomicField::get(lcm_long(s.conductor(), out.conductor())));
        CycElement t = s.lift(out.field_);
        for (auto& [r, v] : out.terms_) v = v * t;
        out.drop_zeros();
        return out;
    }
    /// Exact convolution of coefficient maps.
    friend ExponentialPolynomial operator*(const ExponentialPolynomial& a, const ExponentialPolynomial& b) {
        FieldPtr L = CyclotomicField::get(lcm_long(a.conductor(), b.conductor()));
        ExponentialPolynomial out(L->conductor());
        std::map<long, CycElement> acc;
        for (const auto& [r, x] : a.terms_) {
            CycElement xl = x.lift(L);
            for (const auto& [s, y] : b.terms_) {
                CycElement prod = xl * y.lift(L);
                auto it = acc.find(r + s);
                if (it == acc.end())
                    acc.emplace(r + s, std::move(prod));
                else
                    it->second += prod;
            }
        }
        for (auto& [r, v] : acc)
            if (!v.is_zero()) out.terms_.emplace(r, std::move(v));
        return out;
    }
    friend bool operator==(const ExponentialPolynomial& a, const ExponentialPolynomial& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (const auto& [r, v] : a.terms_) {
            auto it = b.terms_.find(r);
            if (it == b.terms_.end() || !(it->second == v)) return false;
        }
        return true;
    }

private:
    void align(const ExponentialPolynomial& other) {
        if (other.conductor() != conductor())
            relift(CyclotomicField::get(lcm_long(other.conductor(), conductor())));
    }
    void drop_zeros() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (it->second.is_zero())
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    FieldPtr field_;
    std::map<long, CycElement> terms_;
};

}  // namespace coszero
