#pragma once

#include <cstdint>
#include <random>

#include <orbipar/field.hpp>
#include <orbipar/linear.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/series.hpp>

namespace orbipar
{

// mt19937_64 with an explicit rejection-sampling range map, so streams are
// identical across standard libraries.
class rng
{
public:
    explicit rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next()
    {
        return gen_();
    }

    // Uniform in [0, n).
    std::uint64_t below(std::uint64_t n)
    {
        if (n <= 1) {
            return 0;
        }
        const auto limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    fe element(const field &F)
    {
        return static_cast<fe>(below(F.size()));
    }
    fe nonzero(const field &F)
    {
        return static_cast<fe>(1 + below(F.size() - 1));
    }

    series any_series(const field_ptr &f, std::size_t prec)
    {
        series r(f, prec);
        for (std::size_t i = 0; i < prec; ++i) {
            r[i] = element(*f);
        }
        return r;
    }

    series_matrix any_matrix(const field_ptr &f, std::size_t rows, std::size_t cols, std::size_t prec)
    {
        series_matrix m(rows, cols, series(f, prec));
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) {
                m(i, j) = any_series(f, prec);
            }
        }
        return m;
    }

    field_matrix invertible_constant(const field &F, std::size_t n)
    {
        for (;;) {
            field_matrix m(n, n, 0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    m(i, j) = element(F);
                }
            }
            if (kmat::invertible(F, m)) {
                return m;
            }
        }
    }

    // Invertible over k[[s]]: the residue matrix is redrawn until invertible.
    series_matrix unimodular(const field_ptr &f, std::size_t n, std::size_t prec)
    {
        auto m = any_matrix(f, n, n, prec);
        const auto r0 = invertible_constant(*f, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j)[0] = r0(i, j);
            }
        }
        return m;
    }

    // Congruent to the identity modulo s.
    series_matrix unipotent_residue(const field_ptr &f, std::size_t n, std::size_t prec)
    {
        auto m = any_matrix(f, n, n, prec);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j)[0] = i == j ? 1 : 0;
            }
        }
        return m;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace orbipar
