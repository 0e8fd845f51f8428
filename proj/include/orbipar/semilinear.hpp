#pragma once

#include <cstddef>
#include <string>

#include <orbipar/error.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/series.hpp>

namespace orbipar
{

// x -> mat * alpha(x), where alpha(f) = f(img) is the ring map determined by
// the image of the source uniformizer.
struct semilinear {
    series_matrix mat;
    series img;

    std::size_t rank() const noexcept
    {
        return mat.rows();
    }
    bool is_linear() const
    {
        return is_identity_substitution(img);
    }
    friend bool operator==(const semilinear &a, const semilinear &b)
    {
        return a.mat == b.mat && a.img == b.img;
    }
};

inline semilinear linear_map(series_matrix m)
{
    const auto &f = m(0, 0).field_ref();
    const auto n = m(0, 0).prec();
    return {std::move(m), series::monomial(f, n, 1)};
}

inline semilinear ring_map(const series &img, std::size_t rank)
{
    return {identity_series(img.field_ref(), rank, img.prec()), img};
}

// b o a
inline semilinear compose(const semilinear &b, const semilinear &a)
{
    return {b.mat * substitute(a.mat, b.img), substitute(a.img, b.img)};
}

inline semilinear inverse(const semilinear &a)
{
    const auto rev = reversion(a.img);
    return {substitute(inverse(a.mat), rev), rev};
}

// Apply to a Laurent matrix, column by column.
inline semilinear truncate(const semilinear &a, std::size_t prec)
{
    return {truncate(a.mat, prec), a.img.truncate(std::min(prec, a.img.prec()))};
}

inline laurent_matrix apply(const semilinear &a, const laurent_matrix &x)
{
    return to_laurent(a.mat) * substitute(x, a.img);
}

inline series_matrix apply(const semilinear &a, const series_matrix &x)
{
    return a.mat * substitute(x, a.img);
}

// First differing (entry, coefficient) as text, empty when equal.
inline std::string first_difference(const series_matrix &a, const series_matrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return "shape mismatch";
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto &x = a(i, j);
            const auto &y = b(i, j);
            const auto n = std::min(x.prec(), y.prec());
            for (std::size_t k = 0; k < n; ++k) {
                if (x[k] != y[k]) {
                    return "entry (" + std::to_string(i) + "," + std::to_string(j) + "), coefficient " + std::to_string(k);
                }
            }
        }
    }
    return {};
}

inline std::string first_difference(const laurent_matrix &a, const laurent_matrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return "shape mismatch";
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto &x = a(i, j);
            const auto &y = b(i, j);
            const auto lo = std::min(x.floor(), y.floor());
            const auto hi = std::min(x.abs_prec(), y.abs_prec());
            for (long k = lo; k < hi; ++k) {
                if (x.coeff(k) != y.coeff(k)) {
                    return "entry (" + std::to_string(i) + "," + std::to_string(j) + "), exponent " + std::to_string(k);
                }
            }
        }
    }
    return {};
}

inline std::string first_difference(const semilinear &a, const semilinear &b)
{
    for (std::size_t k = 0; k < std::min(a.img.prec(), b.img.prec()); ++k) {
        if (a.img[k] != b.img[k]) {
            return "ring maps differ at coefficient " + std::to_string(k);
        }
    }
    return first_difference(a.mat, b.mat);
}

} // namespace orbipar
