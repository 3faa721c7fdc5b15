#pragma once

// Dense univariate polynomials over Q in the monomial basis.

#include "coszero/rational.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace coszero {

class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    QPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

    static QPoly constant(const Rational& a) { return QPoly(std::vector<Rational>{a}); }
    static QPoly monomial(std::size_t k, const Rational& a = 1) {
        std::vector<Rational> c(k + 1, Rational(0));
        c[k] = a;
        return QPoly(std::move(c));
    }

    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    const Rational& lead() const {
        if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    QPoly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
        return QPoly(std::move(d));
    }

    QPoly monic() const {
        if (is_zero()) return {};
        Rational l = lead();
        std::vector<Rational> d(c_);
        for (auto& x : d) x /= l;
        return QPoly(std::move(d));
    }

    friend QPoly operator+(const QPoly& a, const QPoly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return QPoly(std::move(r));
    }
    friend QPoly operator-(const QPoly& a, const QPoly& b) {
        std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return QPoly(std::move(r));
    }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return QPoly(std::move(r));
    }
    friend QPoly operator*(const Rational& s, const QPoly& a) {
        if (s == 0) return {};
        std::vector<Rational> r(a.c_);
        for (auto& x : r) x *= s;
        return QPoly(std::move(r));
    }
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.c_ == b.c_; }

    /// Euclidean division: a = q*b + r with deg r < deg b.
    friend std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        if (a.degree() < b.degree()) return {QPoly{}, a};
        std::vector<Rational> rem(a.c_);
        std::vector<Rational> quo(a.c_.size() - b.c_.size() + 1, Rational(0));
        const Rational inv_lead = 1 / b.lead();
        const std::size_t db = b.c_.size() - 1;
        for (std::size_t k = quo.size(); k-- > 0;) {
            Rational q = rem[k + db] * inv_lead;
            quo[k] = q;
            if (q == 0) continue;
            for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= q * b.c_[j];
        }
        rem.resize(db);
        return {QPoly(std::move(quo)), QPoly(std::move(rem))};
    }

    /// Monic gcd; gcd(0,0) = 0.
    friend QPoly gcd(QPoly a, QPoly b) {
        while (!b.is_zero()) {
            QPoly r = divmod(a, b).second;
            a = std::move(b);
            b = r.monic();
        }
        return a.monic();
    }

    /// Exact quotient a/b; throws if b does not divide a.
    friend QPoly exact_quotient(const QPoly& a, const QPoly& b) {
        auto [q, r] = divmod(a, b);
        if (!r.is_zero()) throw std::domain_error("polynomial does not divide exactly");
        return q;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

/// Yun's square-free decomposition: g = lead * prod_i factors[i]^(i+1), with
/// the factors monic, square-free and pairwise coprime (constant factors are
/// kept as the polynomial 1 so that indices match multiplicities).
inline std::vector<QPoly> squarefree_decomposition(const QPoly& g) {
    if (g.degree() < 1) return {};
    std::vector<QPoly> out;
    QPoly a = g.monic();
    QPoly b = a.derivative();
    QPoly c = gcd(a, b);
    QPoly w = exact_quotient(a, c);
    QPoly y = exact_quotient(b, c);
    QPoly z = y - w.derivative();
    while (w.degree() > 0) {
        QPoly f = gcd(w, z);
        out.push_back(f);
        w = exact_quotient(w, f);
        y = exact_quotient(z, f);
        z = y - w.derivative();
    }
    while (!out.empty() && out.back().degree() == 0) out.pop_back();
    return out;
}

}  // namespace coszero
