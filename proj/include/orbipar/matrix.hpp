#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <orbipar/error.hpp>
#include <orbipar/field.hpp>
#include <orbipar/series.hpp>

namespace orbipar
{

// Dense row-major matrix. Entries carry their own ring context (field,
// precision), so zero/one prototypes are passed explicitly where needed.
template <typename T>
class matrix
{
public:
    matrix() = default;
    matrix(std::size_t rows, std::size_t cols, const T &fill) : rows_(rows), cols_(cols), e_(rows * cols, fill)
    {
        if (rows == 0 || cols == 0) {
            throw structural_error("matrix dimensions must be positive");
        }
    }
    static matrix identity(std::size_t n, const T &zero, const T &one)
    {
        matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = one;
        }
        return m;
    }

    std::size_t rows() const noexcept
    {
        return rows_;
    }
    std::size_t cols() const noexcept
    {
        return cols_;
    }
    bool square() const noexcept
    {
        return rows_ == cols_;
    }
    T &operator()(std::size_t i, std::size_t j)
    {
        return e_[i * cols_ + j];
    }
    const T &operator()(std::size_t i, std::size_t j) const
    {
        return e_[i * cols_ + j];
    }
    const std::vector<T> &entries() const noexcept
    {
        return e_;
    }

    template <typename F>
    auto map(F &&f) const -> matrix<decltype(f(std::declval<const T &>()))>
    {
        using U = decltype(f(std::declval<const T &>()));
        matrix<U> r(rows_, cols_, f(e_[0]));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                r(i, j) = f((*this)(i, j));
            }
        }
        return r;
    }

    matrix transpose() const
    {
        matrix r(cols_, rows_, e_[0]);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                r(j, i) = (*this)(i, j);
            }
        }
        return r;
    }

    matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
    {
        matrix r(nr, nc, e_[0]);
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = 0; j < nc; ++j) {
                r(i, j) = (*this)(r0 + i, c0 + j);
            }
        }
        return r;
    }

    friend bool operator==(const matrix &a, const matrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }

    friend matrix operator+(const matrix &a, const matrix &b)
    {
        a.check_same_shape(b);
        matrix r(a);
        for (std::size_t i = 0; i < r.e_.size(); ++i) {
            r.e_[i] = a.e_[i] + b.e_[i];
        }
        return r;
    }
    friend matrix operator-(const matrix &a, const matrix &b)
    {
        a.check_same_shape(b);
        matrix r(a);
        for (std::size_t i = 0; i < r.e_.size(); ++i) {
            r.e_[i] = a.e_[i] - b.e_[i];
        }
        return r;
    }
    friend matrix operator*(const matrix &a, const matrix &b)
    {
        if (a.cols_ != b.rows_) {
            throw structural_error("matrix product shape mismatch: " + std::to_string(a.rows_) + "x"
                                   + std::to_string(a.cols_) + " times " + std::to_string(b.rows_) + "x"
                                   + std::to_string(b.cols_));
        }
        matrix r(a.rows_, b.cols_, a.e_[0]);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) {
                T acc = a(i, 0) * b(0, j);
                for (std::size_t k = 1; k < a.cols_; ++k) {
                    acc = acc + a(i, k) * b(k, j);
                }
                r(i, j) = std::move(acc);
            }
        }
        return r;
    }

    void check_same_shape(const matrix &o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw structural_error("matrix shape mismatch");
        }
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> e_;
};

using series_matrix = matrix<series>;
using laurent_matrix = matrix<laurent>;
using field_matrix = matrix<fe>;

// Kronecker product, row-major index convention (i1, i2) -> i1 * r2 + i2.
template <typename T>
matrix<T> kron(const matrix<T> &a, const matrix<T> &b)
{
    matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols(), a(0, 0));
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2) {
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
                    r(i1 * b.rows() + i2, j1 * b.cols() + j2) = a(i1, j1) * b(i2, j2);
                }
            }
        }
    }
    return r;
}

inline series_matrix identity_series(const field_ptr &f, std::size_t n, std::size_t prec)
{
    return series_matrix::identity(n, series(f, prec), series::one(f, prec));
}

inline laurent_matrix identity_laurent(const field_ptr &f, std::size_t n, std::size_t len)
{
    return laurent_matrix::identity(n, laurent(f, 0, len), laurent::monomial(f, 0, len));
}

inline std::size_t precision(const series_matrix &m)
{
    std::size_t p = m(0, 0).prec();
    for (const auto &x : m.entries()) {
        p = std::min(p, x.prec());
    }
    return p;
}

inline series_matrix truncate(const series_matrix &m, std::size_t prec)
{
    return m.map([prec](const series &x) { return x.truncate(prec); });
}

inline laurent_matrix to_laurent(const series_matrix &m)
{
    return m.map([](const series &x) { return laurent(x); });
}

inline series_matrix to_series(const laurent_matrix &m, std::size_t prec)
{
    return m.map([prec](const laurent &x) { return x.to_series(prec); });
}

// Largest precision to which every entry converts to a power series, or
// nothing when some entry has a nonzero negative coefficient.
inline long integral_precision(const laurent_matrix &m)
{
    long p = m(0, 0).abs_prec();
    for (const auto &x : m.entries()) {
        if (x.valuation() < 0) {
            return -1;
        }
        p = std::min(p, x.abs_prec());
    }
    return p;
}

inline field_matrix residue(const series_matrix &m)
{
    return m.map([](const series &x) { return x[0]; });
}

// Entrywise substitution s -> img.
inline series_matrix substitute(const series_matrix &m, const series &img)
{
    return m.map([&img](const series &x) { return substitute(x, img); });
}

inline laurent_matrix substitute(const laurent_matrix &m, const series &img)
{
    return m.map([&img](const laurent &x) { return substitute(x, img); });
}

inline bool is_identity(const series_matrix &m)
{
    if (!m.square()) {
        return false;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto &x = m(i, j);
            for (std::size_t k = 0; k < x.prec(); ++k) {
                const fe want = (i == j && k == 0) ? 1 : 0;
                if (x[k] != want) {
                    return false;
                }
            }
        }
    }
    return true;
}

// Field-level matrix helpers.
namespace kmat
{

inline field_matrix identity(std::size_t n)
{
    return field_matrix::identity(n, 0, 1);
}

inline field_matrix mul(const field &F, const field_matrix &a, const field_matrix &b)
{
    if (a.cols() != b.rows()) {
        throw structural_error("matrix product shape mismatch");
    }
    field_matrix r(a.rows(), b.cols(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                r(i, j) = F.add(r(i, j), F.mul(a(i, k), b(k, j)));
            }
        }
    }
    return r;
}

inline field_matrix sub(const field &F, const field_matrix &a, const field_matrix &b)
{
    a.check_same_shape(b);
    field_matrix r(a);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            r(i, j) = F.sub(a(i, j), b(i, j));
        }
    }
    return r;
}

inline std::size_t rank(const field &F, field_matrix m)
{
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) {
            ++piv;
        }
        if (piv == m.rows()) {
            continue;
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::swap(m(r, j), m(piv, j));
        }
        const auto inv = F.inv(m(r, c));
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (m(i, c) == 0) {
                continue;
            }
            const auto f = F.mul(m(i, c), inv);
            for (std::size_t j = c; j < m.cols(); ++j) {
                m(i, j) = F.sub(m(i, j), F.mul(f, m(r, j)));
            }
        }
        ++r;
    }
    return r;
}

inline bool invertible(const field &F, const field_matrix &m)
{
    return m.square() && rank(F, m) == m.rows();
}

inline field_matrix inverse(const field &F, field_matrix m)
{
    if (!m.square()) {
        throw structural_error("inverse of a non-square matrix");
    }
    const auto n = m.rows();
    auto inv = identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m(piv, c) == 0) {
            ++piv;
        }
        if (piv == n) {
            throw not_invertible("singular matrix over " + F.name(), 0);
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(m(c, j), m(piv, j));
            std::swap(inv(c, j), inv(piv, j));
        }
        const auto pinv = F.inv(m(c, c));
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = F.mul(m(c, j), pinv);
            inv(c, j) = F.mul(inv(c, j), pinv);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c) == 0) {
                continue;
            }
            const auto f = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = F.sub(m(i, j), F.mul(f, m(c, j)));
                inv(i, j) = F.sub(inv(i, j), F.mul(f, inv(c, j)));
            }
        }
    }
    return inv;
}

} // namespace kmat

inline bool is_unimodular(const series_matrix &m)
{
    return m.square() && kmat::invertible(m(0, 0).fld(), residue(m));
}

// Inverse over k[[s]]; the residue matrix must be invertible.
inline series_matrix inverse(series_matrix m)
{
    if (!m.square()) {
        throw structural_error("inverse of a non-square matrix");
    }
    const auto n = m.rows();
    const field_ptr f = m(0, 0).field_ref();
    const auto prec = precision(m);
    m = truncate(m, prec);
    auto inv = identity_series(f, n, prec);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && !m(piv, c).is_unit()) {
            ++piv;
        }
        if (piv == n) {
            throw not_invertible("matrix is not invertible over the power series ring", m(c, c).valuation());
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(m(c, j), m(piv, j));
            std::swap(inv(c, j), inv(piv, j));
        }
        const auto pinv = inverse(m(c, c));
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = m(c, j) * pinv;
            inv(c, j) = inv(c, j) * pinv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c).is_zero()) {
                continue;
            }
            const auto fct = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = m(i, j) - fct * m(c, j);
                inv(i, j) = inv(i, j) - fct * inv(c, j);
            }
        }
    }
    return inv;
}

// Inverse over k((s)) with minimal-valuation pivots (lowest row on ties).
inline laurent_matrix inverse(laurent_matrix m)
{
    if (!m.square()) {
        throw structural_error("inverse of a non-square matrix");
    }
    const auto n = m.rows();
    const field_ptr f = m(0, 0).field_ref();
    long len = 0;
    for (const auto &x : m.entries()) {
        len = std::max(len, static_cast<long>(x.length()));
    }
    // exact identity, modelled by a long window
    const auto exact = static_cast<std::size_t>(len + 64);
    auto inv = identity_laurent(f, n, exact);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        long best = 0;
        for (std::size_t i = c; i < n; ++i) {
            if (m(i, c).is_zero()) {
                continue;
            }
            const auto v = m(i, c).valuation();
            if (piv == n || v < best) {
                piv = i;
                best = v;
            }
        }
        if (piv == n) {
            throw not_invertible("matrix is singular over the Laurent field", 0);
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(m(c, j), m(piv, j));
            std::swap(inv(c, j), inv(piv, j));
        }
        const auto pinv = inverse(m(c, c));
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = m(c, j) * pinv;
            inv(c, j) = inv(c, j) * pinv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c).is_zero()) {
                continue;
            }
            const auto fct = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = m(i, j) - fct * m(c, j);
                inv(i, j) = inv(i, j) - fct * inv(c, j);
            }
        }
    }
    return inv;
}

// Determinant over k((s)) by elimination.
inline laurent det(laurent_matrix m)
{
    if (!m.square()) {
        throw structural_error("determinant of a non-square matrix");
    }
    const auto n = m.rows();
    auto d = laurent::monomial(m(0, 0).field_ref(), 0, 1u << 12);
    bool negate = false;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        long best = 0;
        for (std::size_t i = c; i < n; ++i) {
            if (m(i, c).is_zero()) {
                continue;
            }
            const auto v = m(i, c).valuation();
            if (piv == n || v < best) {
                piv = i;
                best = v;
            }
        }
        if (piv == n) {
            return laurent(m(0, 0).field_ref(), 0, std::size_t{0});
        }
        if (piv != c) {
            negate = !negate;
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(c, j), m(piv, j));
            }
        }
        d = d * m(c, c);
        const auto pinv = inverse(m(c, c));
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) {
                continue;
            }
            const auto fct = m(i, c) * pinv;
            for (std::size_t j = c; j < n; ++j) {
                m(i, j) = m(i, j) - fct * m(c, j);
            }
        }
    }
    return negate ? -d : d;
}

// s-valuations of the elementary divisors over k[[s]] (Smith form), sorted
// ascending. Entries that vanish within the known window are reported at the
// window bound.
inline std::vector<long> elementary_divisor_valuations(const series_matrix &a)
{
    auto m = to_laurent(a);
    const auto rows = m.rows(), cols = m.cols();
    std::vector<long> out;
    const auto n = std::min(rows, cols);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t bi = rows, bj = cols;
        long best = 0;
        for (std::size_t i = k; i < rows; ++i) {
            for (std::size_t j = k; j < cols; ++j) {
                if (m(i, j).is_zero()) {
                    continue;
                }
                const auto v = m(i, j).valuation();
                if (bi == rows || v < best) {
                    bi = i;
                    bj = j;
                    best = v;
                }
            }
        }
        if (bi == rows) {
            for (std::size_t r = k; r < n; ++r) {
                long w = m(k, k).abs_prec();
                for (std::size_t i = k; i < rows; ++i) {
                    for (std::size_t j = k; j < cols; ++j) {
                        w = std::min(w, m(i, j).abs_prec());
                    }
                }
                out.push_back(w);
            }
            break;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            std::swap(m(k, j), m(bi, j));
        }
        for (std::size_t i = 0; i < rows; ++i) {
            std::swap(m(i, k), m(i, bj));
        }
        out.push_back(best);
        const auto pinv = inverse(m(k, k));
        for (std::size_t i = k + 1; i < rows; ++i) {
            if (m(i, k).is_zero()) {
                continue;
            }
            const auto fct = m(i, k) * pinv;
            for (std::size_t j = k; j < cols; ++j) {
                m(i, j) = m(i, j) - fct * m(k, j);
            }
        }
        for (std::size_t j = k + 1; j < cols; ++j) {
            m(k, j) = laurent(m(k, j).field_ref(), m(k, j).abs_prec(), std::size_t{0});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace orbipar
