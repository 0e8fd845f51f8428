#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <orbipar/error.hpp>
#include <orbipar/linear.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/random.hpp>
#include <orbipar/semilinear.hpp>

namespace orbipar
{

// psi(g) applied entrywise.
inline series_matrix act(const local_extension &ext, elem g, const series_matrix &m)
{
    return substitute(m, ext.image(g));
}

inline laurent_matrix act(const local_extension &ext, elem g, const laurent_matrix &m)
{
    return substitute(m, ext.image(g));
}

// Semilinear action Psi(g)(v) = A_g psi(g)(v) on R^r.
struct cocycle {
    extension_ptr ext;
    std::size_t rank = 0;
    std::vector<series_matrix> mats;

    const series_matrix &operator[](elem g) const
    {
        return mats.at(g);
    }
    semilinear as_semilinear(elem g) const
    {
        return {mats.at(g), ext->image(g)};
    }
};

inline cocycle trivial_cocycle(const extension_ptr &ext, std::size_t rank)
{
    return {ext, rank, std::vector<series_matrix>(ext->group.order(), identity_series(ext->fld, rank, ext->prec))};
}

inline check_result verify_cocycle(const cocycle &c)
{
    const auto &ext = *c.ext;
    const auto &G = ext.group;
    if (c.mats.size() != G.order()) {
        return check_result::fail("cocycle has " + std::to_string(c.mats.size()) + " matrices for a group of order "
                                  + std::to_string(G.order()));
    }
    for (elem g = 0; g < G.order(); ++g) {
        if (c.mats[g].rows() != c.rank || c.mats[g].cols() != c.rank) {
            return check_result::fail("matrix of element " + std::to_string(g) + " has the wrong shape");
        }
        if (precision(c.mats[g]) != ext.prec) {
            return check_result::fail("matrix of element " + std::to_string(g) + " has the wrong precision");
        }
    }
    if (!is_identity(c.mats[0])) {
        return check_result::fail("A_e is not the identity");
    }
    for (elem h = 0; h < G.order(); ++h) {
        for (elem g = 0; g < G.order(); ++g) {
            const auto rhs = c.mats[h] * act(ext, h, c.mats[g]);
            const auto where = first_difference(c.mats[G.mul(h, g)], rhs);
            if (!where.empty()) {
                return check_result::fail("cocycle law fails at pair (" + std::to_string(h) + "," + std::to_string(g)
                                          + "): " + where);
            }
        }
    }
    for (elem g = 0; g < G.order(); ++g) {
        if (!is_unimodular(c.mats[g])) {
            return check_result::fail("A_" + std::to_string(g) + " is not invertible");
        }
    }
    return check_result::pass();
}

// The same action in the basis given by the columns of B:
// A'_g = B^-1 A_g psi(g)(B).
inline cocycle change_basis(const cocycle &c, const series_matrix &B)
{
    const auto Binv = inverse(B);
    cocycle out{c.ext, c.rank, {}};
    for (elem g = 0; g < c.mats.size(); ++g) {
        out.mats.push_back(Binv * c.mats[g] * act(*c.ext, g, B));
    }
    return out;
}

// A_g = B psi(g)(B)^-1
inline cocycle coboundary(const extension_ptr &ext, const series_matrix &B)
{
    cocycle out{ext, B.rows(), {}};
    for (elem g = 0; g < ext->group.order(); ++g) {
        out.mats.push_back(B * inverse(act(*ext, g, B)));
    }
    return out;
}

// A_g psi(g)(B) = B for every g.
inline check_result check_trivialization(const cocycle &c, const series_matrix &B)
{
    if (!is_unimodular(B)) {
        return check_result::fail("B is not invertible");
    }
    for (elem g = 0; g < c.mats.size(); ++g) {
        const auto where = first_difference(c.mats[g] * act(*c.ext, g, B), B);
        if (!where.empty()) {
            return check_result::fail("A_g != B psi(g)(B)^-1 at element " + std::to_string(g) + ": " + where);
        }
    }
    return check_result::pass();
}

enum class search_status { found, obstructed, inconclusive };

inline const char *to_string(search_status s)
{
    switch (s) {
    case search_status::found:
        return "found";
    case search_status::obstructed:
        return "obstructed";
    default:
        return "inconclusive";
    }
}

struct search_options {
    std::uint64_t budget = 1000000; // cap on exhaustive residue enumeration
    std::uint64_t seed = 0;
    int attempts = 8; // random candidates when enumeration is over budget
};

struct trivialize_result {
    search_status status = search_status::inconclusive;
    std::optional<series_matrix> B;
    std::string stage;
    std::size_t level = 0;
    std::string message;
};

namespace detail
{

inline std::uint64_t capped_power(std::uint64_t base, std::size_t exp, std::uint64_t cap)
{
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > cap / base) {
            return cap + 1;
        }
        r *= base;
    }
    return r;
}

inline field_matrix unvec(const kvec &v, std::size_t rows, std::size_t cols)
{
    field_matrix m(rows, cols, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = v[i * cols + j];
        }
    }
    return m;
}

} // namespace detail

struct subspace_search {
    search_status status = search_status::inconclusive;
    kvec coords; // coefficients on the spanning vectors
    std::uint64_t tried = 0;
};

// Looks for a combination of the given vectors whose matrix (after proj)
// is invertible. Enumerates exhaustively when q^dim <= budget, otherwise
// samples. Exhaustive failure is a proof that none exists.
template <typename Proj>
subspace_search find_invertible(const field &F, const std::vector<kvec> &basis, Proj &&proj,
                                const search_options &opt)
{
    subspace_search out;
    const auto d = basis.size();
    if (d == 0) {
        // only the zero vector, never invertible for positive rank
        out.status = search_status::obstructed;
        out.tried = 1;
        return out;
    }
    const auto total = detail::capped_power(F.size(), d, opt.budget);
    auto eval = [&](const kvec &coords) {
        kvec v(basis.empty() ? 0 : basis[0].size(), 0);
        for (std::size_t i = 0; i < d; ++i) {
            if (coords[i] == 0) {
                continue;
            }
            for (std::size_t k = 0; k < v.size(); ++k) {
                v[k] = F.add(v[k], F.mul(coords[i], basis[i][k]));
            }
        }
        return kmat::invertible(F, proj(v));
    };
    if (total <= opt.budget) {
        kvec coords(d, 0);
        for (std::uint64_t code = 0; code < total; ++code) {
            auto c = code;
            for (std::size_t i = 0; i < d; ++i) {
                coords[i] = static_cast<fe>(c % F.size());
                c /= F.size();
            }
            ++out.tried;
            if (eval(coords)) {
                out.status = search_status::found;
                out.coords = coords;
                return out;
            }
        }
        out.status = search_status::obstructed;
        return out;
    }
    rng gen(opt.seed);
    const auto samples = std::max<std::uint64_t>(static_cast<std::uint64_t>(opt.attempts) * 64, 64);
    for (std::uint64_t s = 0; s < samples; ++s) {
        kvec coords(d);
        for (auto &x : coords) {
            x = gen.element(F);
        }
        ++out.tried;
        if (eval(coords)) {
            out.status = search_status::found;
            out.coords = coords;
            return out;
        }
    }
    return out;
}

namespace detail
{

// Linear system for A_g psi(g)(I + X) = I + X over the coefficients of
// X = sum_{1<=j<=top} X_j s^j, keeping equations of level <= top.
inline void lifting_system(const cocycle &c, const std::vector<elem> &gens, std::size_t top,
                           std::vector<kvec> &rows, kvec &rhs)
{
    const auto &ext = *c.ext;
    const auto &F = *ext.fld;
    const auto r = c.rank;
    const auto N = ext.prec;
    const auto unknowns = top * r * r;
    rows.clear();
    rhs.clear();
    for (auto g : gens) {
        const auto &A = c.mats[g];
        std::vector<series> apow{series::one(ext.fld, N)};
        for (std::size_t j = 1; j <= top; ++j) {
            apow.push_back(apow.back() * ext.image(g));
        }
        const std::size_t base = rows.size();
        for (std::size_t m = 0; m <= top; ++m) {
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t l = 0; l < r; ++l) {
                    rows.emplace_back(unknowns, 0);
                    rhs.push_back(F.neg(F.sub(A(i, l)[m], (i == l && m == 0) ? 1 : 0)));
                }
            }
        }
        auto row_of = [&](std::size_t m, std::size_t i, std::size_t l) { return base + (m * r + i) * r + l; };
        for (std::size_t j = 1; j <= top; ++j) {
            for (std::size_t k = 0; k < r; ++k) {
                for (std::size_t l = 0; l < r; ++l) {
                    const auto col = ((j - 1) * r + k) * r + l;
                    // A_g psi(g)(E_kl s^j): column l equals A_g[:,k] * a_g^j
                    for (std::size_t i = 0; i < r; ++i) {
                        const auto prod = A(i, k) * apow[j];
                        for (std::size_t m = j; m <= top; ++m) {
                            if (prod[m] != 0) {
                                auto &x = rows[row_of(m, i, l)][col];
                                x = F.add(x, prod[m]);
                            }
                        }
                    }
                    auto &x = rows[row_of(j, k, l)][col];
                    x = F.sub(x, 1);
                }
            }
        }
    }
}

} // namespace detail

// Searches B with A_g = B psi(g)(B)^-1: tame averaging, then a residue
// search, then level-by-level lifting with B(0) = I.
inline trivialize_result trivialize(const cocycle &c, const search_options &opt = {})
{
    trivialize_result out;
    const auto &ext = *c.ext;
    const auto &F = *ext.fld;
    const auto &G = ext.group;
    const auto r = c.rank;
    const auto N = ext.prec;

    rng gen(opt.seed);
    for (int attempt = 0; attempt < opt.attempts; ++attempt) {
        const auto C = gen.any_matrix(ext.fld, r, r, N);
        auto B = c.mats[0] * C;
        for (elem g = 1; g < G.order(); ++g) {
            B = B + c.mats[g] * act(ext, g, C);
        }
        if (is_unimodular(B) && check_trivialization(c, B)) {
            out.status = search_status::found;
            out.B = B;
            out.stage = "averaging";
            out.message = "found by averaging at attempt " + std::to_string(attempt + 1);
            return out;
        }
    }

    const auto gens = G.generators();
    // residue level: Abar_g X = X
    std::vector<kvec> rows;
    for (auto g : gens) {
        const auto Ab = residue(c.mats[g]);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t l = 0; l < r; ++l) {
                kvec row(r * r, 0);
                for (std::size_t k = 0; k < r; ++k) {
                    row[k * r + l] = F.add(row[k * r + l], Ab(i, k));
                }
                row[i * r + l] = F.sub(row[i * r + l], 1);
                rows.push_back(std::move(row));
            }
        }
    }
    const auto level0 = kernel(F, rows, r * r);
    const auto found0 =
        find_invertible(F, level0, [r](const kvec &v) { return detail::unvec(v, r, r); }, opt);
    if (found0.status == search_status::obstructed) {
        out.status = search_status::obstructed;
        out.stage = "residue";
        out.message = "no invertible residue solution (exhaustive over " + std::to_string(found0.tried) + " candidates)";
        return out;
    }
    if (found0.status == search_status::inconclusive) {
        out.stage = "residue";
        out.message = "residue search budget exhausted";
        return out;
    }
    if (N == 1) {
        out.status = search_status::found;
        out.stage = "residue";
        out.B = identity_series(ext.fld, r, N);
        return out;
    }

    // an invertible residue solution forces Abar_g = I, so B(0) = I
    std::vector<kvec> sys;
    kvec rhs;
    detail::lifting_system(c, gens, N - 1, sys, rhs);
    linear_solution sol;
    try {
        sol = solve_linear(F, sys, rhs);
    }
    catch (const no_solution &) {
        for (std::size_t top = 1; top < N; ++top) {
            detail::lifting_system(c, gens, top, sys, rhs);
            try {
                solve_linear(F, sys, rhs);
            }
            catch (const no_solution &ns) {
                out.status = search_status::obstructed;
                out.stage = "lifting";
                out.level = top;
                out.message = "lifting obstructed at level " + std::to_string(top) + " (" + ns.what() + ")";
                return out;
            }
        }
        throw;
    }
    auto B = identity_series(ext.fld, r, N);
    for (std::size_t j = 1; j < N; ++j) {
        for (std::size_t k = 0; k < r; ++k) {
            for (std::size_t l = 0; l < r; ++l) {
                B(k, l)[j] = sol.particular[((j - 1) * r + k) * r + l];
            }
        }
    }
    const auto verdict = check_trivialization(c, B);
    if (!verdict) {
        out.stage = "lifting";
        out.message = "lifted candidate failed verification: " + verdict.message;
        return out;
    }
    out.status = search_status::found;
    out.B = B;
    out.stage = "lifting";
    out.level = N - 1;
    return out;
}

} // namespace orbipar
