#pragma once

#include <cstddef>
#include <vector>

#include <orbipar/error.hpp>
#include <orbipar/field.hpp>
#include <orbipar/matrix.hpp>

namespace orbipar
{

using kvec = std::vector<fe>;

struct linear_solution
{
    kvec particular;
    std::vector<kvec> kernel;
    std::size_t rank = 0;
};

// Reduced row echelon form in place; returns the pivot column of each pivot
// row. Pivot order: leftmost column, lowest row index.
inline std::vector<std::size_t> rref(const field &F, std::vector<kvec> &rows, std::size_t ncols)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) {
            ++piv;
        }
        if (piv == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[piv]);
        const auto inv = F.inv(rows[r][c]);
        for (auto &x : rows[r]) {
            x = F.mul(x, inv);
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) {
                continue;
            }
            const auto f = rows[i][c];
            for (std::size_t j = c; j < rows[i].size(); ++j) {
                if (rows[r][j] != 0) {
                    rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Solves M x = rhs over the base field. Throws no_solution on inconsistency.
inline linear_solution solve_linear(const field &F, const std::vector<kvec> &M, const kvec &rhs)
{
    if (M.size() != rhs.size()) {
        throw structural_error("solve_linear: row count differs from rhs length");
    }
    const std::size_t n = M.empty() ? 0 : M[0].size();
    std::vector<kvec> aug;
    aug.reserve(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (M[i].size() != n) {
            throw structural_error("solve_linear: ragged matrix");
        }
        kvec row(M[i]);
        row.push_back(rhs[i]);
        aug.push_back(std::move(row));
    }
    const auto pivots = rref(F, aug, n + 1);
    linear_solution out;
    out.rank = pivots.size();
    if (!pivots.empty() && pivots.back() == n) {
        throw no_solution(out.rank - 1, out.rank);
    }
    out.particular.assign(n, 0);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        is_pivot[pivots[r]] = true;
        out.particular[pivots[r]] = aug[r][n];
    }
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) {
            continue;
        }
        kvec v(n, 0);
        v[c] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            v[pivots[r]] = F.neg(aug[r][c]);
        }
        out.kernel.push_back(std::move(v));
    }
    return out;
}

inline linear_solution solve_linear(const field &F, const field_matrix &M, const kvec &rhs)
{
    std::vector<kvec> rows(M.rows(), kvec(M.cols()));
    for (std::size_t i = 0; i < M.rows(); ++i) {
        for (std::size_t j = 0; j < M.cols(); ++j) {
            rows[i][j] = M(i, j);
        }
    }
    return solve_linear(F, rows, rhs);
}

inline std::vector<kvec> kernel(const field &F, const std::vector<kvec> &M, std::size_t ncols)
{
    if (M.empty()) {
        std::vector<kvec> basis;
        for (std::size_t c = 0; c < ncols; ++c) {
            kvec v(ncols, 0);
            v[c] = 1;
            basis.push_back(std::move(v));
        }
        return basis;
    }
    return solve_linear(F, M, kvec(M.size(), 0)).kernel;
}

inline kvec apply(const field &F, const std::vector<kvec> &M, const kvec &x)
{
    kvec y(M.size(), 0);
    for (std::size_t i = 0; i < M.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (M[i][j] != 0 && x[j] != 0) {
                y[i] = F.add(y[i], F.mul(M[i][j], x[j]));
            }
        }
    }
    return y;
}

} // namespace orbipar
