#pragma once

// Exact linear algebra on d-windows (x_{1+r}, ..., x_{d+r}) of a sequence.

#include "coszero/cyclotomic.hpp"
#include "coszero/rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace coszero {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;
using IntegerVector = std::vector<Integer>;
using IntegerMatrix = std::vector<IntegerVector>;

inline RationalMatrix windows(const RationalVector& x, std::size_t d) {
    if (d == 0) throw std::invalid_argument("windows: d must be at least 1");
    if (d > x.size()) throw std::invalid_argument("windows: d exceeds the sequence length");
    RationalMatrix out;
    out.reserve(x.size() - d + 1);
    for (std::size_t r = 0; r + d <= x.size(); ++r) out.emplace_back(x.begin() + static_cast<long>(r), x.begin() + static_cast<long>(r + d));
    return out;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += a[i] * b[i];
    return s;
}

namespace detail {

inline IntegerVector integer_row(const RationalVector& r) {
    Integer den = common_denominator(r);
    IntegerVector out;
    out.reserve(r.size());
    for (const auto& q : r) out.push_back(Integer(q * den));
    return out;
}

inline void make_primitive(IntegerVector& v) {
    Integer g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

/// Row-echelon basis built row by row with fraction-free updates
/// r <- b_p r - r_p b; rows are kept primitive and sorted by pivot column.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

    /// Reduces the row against the basis; inserts it if independent.
    bool insert(IntegerVector r) {
        for (const auto& [p, b] : rows_) {
            if (r[p] == 0) continue;
            Integer rp = r[p];
            for (std::size_t j = 0; j < cols_; ++j) r[j] = b[p] * r[j] - rp * b[j];
            make_primitive(r);
        }
        std::size_t p = 0;
        while (p < cols_ && r[p] == 0) ++p;
        if (p == cols_) return false;
        auto it = rows_.begin();
        while (it != rows_.end() && it->first < p) ++it;
        rows_.insert(it, {p, std::move(r)});
        return true;
    }

    std::size_t rank() const { return rows_.size(); }
    bool full() const { return rows_.size() == cols_; }

    /// Reduced row-echelon form over Q: pivot columns and rows with pivot 1.
    std::vector<std::pair<std::size_t, RationalVector>> reduced() const {
        std::vector<std::pair<std::size_t, RationalVector>> R;
        for (const auto& [p, b] : rows_) {
            RationalVector v(cols_);
            for (std::size_t j = 0; j < cols_; ++j) v[j] = Rational(b[j], b[p]);
            for (auto& q : v) q.canonicalize();
            R.push_back({p, std::move(v)});
        }
        for (std::size_t i = R.size(); i-- > 0;) {
            const std::size_t p = R[i].first;
            for (std::size_t k = 0; k < i; ++k) {
                Rational f = R[k].second[p];
                if (f == 0) continue;
                for (std::size_t j = 0; j < cols_; ++j) R[k].second[j] -= f * R[i].second[j];
            }
        }
        return R;
    }

    /// Null-space vector for free column f: v_f = 1, v_p = -R[p][f].
    RationalVector null_vector(std::size_t f) const {
        RationalVector v(cols_, Rational(0));
        v[f] = 1;
        for (const auto& [p, row] : reduced()) v[p] = -row[f];
        return v;
    }

    std::vector<std::size_t> free_columns() const {
        std::vector<std::size_t> out;
        std::size_t i = 0;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (i < rows_.size() && rows_[i].first == j)
                ++i;
            else
                out.push_back(j);
        }
        return out;
    }

private:
    std::size_t cols_;
    std::vector<std::pair<std::size_t, IntegerVector>> rows_;
};

/// Integer multiple of v, primitive, first nonzero entry positive.
inline RationalVector normalize_direction(const RationalVector& v) {
    IntegerVector w = integer_row(v);
    make_primitive(w);
    std::size_t i = 0;
    while (i < w.size() && w[i] == 0) ++i;
    const bool flip = i < w.size() && w[i] < 0;
    RationalVector out;
    for (auto& x : w) out.emplace_back(flip ? Integer(-x) : x);
    return out;
}

}  // namespace detail

struct WindowSpace {
    std::size_t d = 0;
    std::size_t source_length = 0;
    std::size_t rank = 0;
    std::vector<RationalVector> kernel_basis;  // orthogonal to every window
};

inline WindowSpace window_rank(const RationalVector& x, std::size_t d) {
    auto ws = windows(x, d);
    detail::EchelonBasis basis(d);
    for (const auto& w : ws) {
        basis.insert(detail::integer_row(w));
        if (basis.full()) break;
    }
    WindowSpace out;
    out.d = d;
    out.source_length = x.size();
    out.rank = basis.rank();
    for (std::size_t f : basis.free_columns()) out.kernel_basis.push_back(detail::normalize_direction(basis.null_vector(f)));
    return out;
}

/// A nonzero v orthogonal to every d-window with v_j = 0 for j > t + 1
/// (1-based), t the window rank. Among such vectors, the one from the first
/// free column of the eliminated front block, i.e. with the shortest support.
inline RationalVector front_supported_kernel(const RationalVector& x, std::size_t d) {
    auto ws = windows(x, d);
    const std::size_t t = window_rank(x, d).rank;
    if (t >= d) throw std::domain_error("front_supported_kernel: windows have full rank, no kernel vector exists");
    const std::size_t cols = t + 1;
    detail::EchelonBasis basis(cols);
    for (const auto& w : ws) {
        basis.insert(detail::integer_row(RationalVector(w.begin(), w.begin() + static_cast<long>(cols))));
        if (basis.full()) break;
    }
    auto fc = basis.free_columns();
    if (fc.empty()) throw std::logic_error("front_supported_kernel: front block unexpectedly has full rank");
    RationalVector v = basis.null_vector(fc.front());
    v.resize(d, Rational(0));
    return detail::normalize_direction(v);
}

/// Determinant of an integer matrix by Bareiss elimination.
inline Integer bareiss_determinant(IntegerMatrix A) {
    const std::size_t n = A.size();
    if (n == 0) return Integer(1);
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("determinant: matrix is not square");
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (A[k][k] == 0) {
            std::size_t i = k + 1;
            while (i < n && A[i][k] == 0) ++i;
            if (i == n) return Integer(0);
            std::swap(A[k], A[i]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = A[i][j] * A[k][k] - A[i][k] * A[k][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                A[i][j] = std::move(v);
            }
            A[i][k] = 0;
        }
        prev = A[k][k];
    }
    return sign * A[n - 1][n - 1];
}

/// Exact solution of A x = b over Q by Gauss-Jordan elimination.
inline RationalVector solve_exact(const IntegerMatrix& A, const RationalVector& b) {
    const std::size_t n = A.size();
    if (b.size() != n) throw std::invalid_argument("solve_exact: dimension mismatch");
    RationalMatrix M(n, RationalVector(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        if (A[i].size() != n) throw std::invalid_argument("solve_exact: matrix is not square");
        for (std::size_t j = 0; j < n; ++j) M[i][j] = Rational(A[i][j]);
        M[i][n] = b[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && M[p][k] == 0) ++p;
        if (p == n) throw std::domain_error("solve_exact: singular matrix");
        std::swap(M[k], M[p]);
        const Rational inv = 1 / M[k][k];
        for (std::size_t j = k; j <= n; ++j) M[k][j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || M[i][k] == 0) continue;
            const Rational f = M[i][k];
            for (std::size_t j = k; j <= n; ++j) M[i][j] -= f * M[k][j];
        }
    }
    RationalVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = M[i][n];
    return x;
}

struct CramerReport {
    RationalVector x;
    Integer determinant;
    Rational max_abs_x;
    Rational entry_bound;  // M(R)
    double bound = 0;      // M^(n-1) n^(n/2) |b|_inf, rounded for display
    bool bound_ok = false; // decided exactly: |x|^2 <= M^(2n-2) n^n |b|^2
};

/// Solves A x = b and checks |x|_inf <= M^(n-1) n^(n/2) |b|_inf, where M is
/// the largest |entry| of A unless given.
inline CramerReport cramer_bound_check(const IntegerMatrix& A, const RationalVector& b,
                                       std::optional<Rational> entry_bound = std::nullopt) {
    CramerReport rep;
    rep.determinant = bareiss_determinant(A);
    if (rep.determinant == 0) throw std::domain_error("cramer_bound_check: singular matrix");
    rep.x = solve_exact(A, b);
    const std::size_t n = A.size();
    Rational M = 0;
    for (const auto& row : A)
        for (const auto& a : row) M = std::max(M, Rational(abs(a)));
    if (entry_bound) {
        if (*entry_bound < M) throw std::invalid_argument("cramer_bound_check: entry bound below an entry of A");
        M = *entry_bound;
    }
    rep.entry_bound = M;
    Rational bmax = 0;
    for (const auto& v : b) bmax = std::max(bmax, abs_value(v));
    for (const auto& v : rep.x) rep.max_abs_x = std::max(rep.max_abs_x, abs_value(v));
    const Rational lhs = rep.max_abs_x * rep.max_abs_x;
    const Rational rhs = rational_pow(M, 2 * (n - 1)) * rational_pow(Rational(static_cast<long>(n)), n) * bmax * bmax;
    rep.bound_ok = lhs <= rhs;
    rep.bound = std::pow(M.get_d(), static_cast<double>(n) - 1) * std::pow(static_cast<double>(n), static_cast<double>(n) / 2) *
                bmax.get_d();
    return rep;
}

/// Rank of a matrix over a cyclotomic field by Gaussian elimination.
inline std::size_t cyclotomic_rank(std::vector<std::vector<CycElement>> M) {
    std::size_t rank = 0;
    const std::size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && M[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(M[rank], M[p]);
        const CycElement inv = M[rank][c].inverse();
        for (std::size_t i = rank + 1; i < rows; ++i) {
            if (M[i][c].is_zero()) continue;
            const CycElement f = M[i][c] * inv;
            for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace coszero
