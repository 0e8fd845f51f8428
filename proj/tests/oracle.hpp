#pragma once

// Naive reference computations over plain integers, independent of the
// library's field tables and series code.

#include <cstdint>
#include <vector>

#include <orbipar/series.hpp>

namespace oracle
{

using ivec = std::vector<long long>;

inline long long mod(long long a, long long p)
{
    a %= p;
    return a < 0 ? a + p : a;
}

inline ivec digits(std::uint32_t a, unsigned p, unsigned k)
{
    ivec d(k);
    for (unsigned i = 0; i < k; ++i) {
        d[i] = a % p;
        a /= p;
    }
    return d;
}

inline std::uint32_t undigits(const ivec &d, unsigned p)
{
    std::uint32_t r = 0, w = 1;
    for (auto x : d) {
        r += static_cast<std::uint32_t>(x) * w;
        w *= p;
    }
    return r;
}

inline std::uint32_t gf_add(std::uint32_t a, std::uint32_t b, unsigned p, unsigned k)
{
    auto x = digits(a, p, k), y = digits(b, p, k);
    for (unsigned i = 0; i < k; ++i) {
        x[i] = mod(x[i] + y[i], p);
    }
    return undigits(x, p);
}

inline std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b, unsigned p, unsigned k,
                            const std::vector<std::uint32_t> &modulus)
{
    auto x = digits(a, p, k), y = digits(b, p, k);
    ivec prod(2 * k, 0);
    for (unsigned i = 0; i < k; ++i) {
        for (unsigned j = 0; j < k; ++j) {
            prod[i + j] = mod(prod[i + j] + x[i] * y[j], p);
        }
    }
    // reduce by the monic modulus from the top
    for (int d = static_cast<int>(2 * k) - 1; d >= static_cast<int>(k); --d) {
        const auto c = prod[d];
        if (c == 0) {
            continue;
        }
        for (unsigned i = 0; i <= k; ++i) {
            prod[d - k + i] = mod(prod[d - k + i] - c * modulus[i], p);
        }
    }
    prod.resize(k);
    return undigits(prod, p);
}

// Prime-field series helpers.
inline ivec mul_series(const ivec &a, const ivec &b, long long p, std::size_t n)
{
    ivec r(n, 0);
    for (std::size_t i = 0; i < a.size() && i < n; ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) {
            r[i + j] = mod(r[i + j] + a[i] * b[j], p);
        }
    }
    return r;
}

inline long long inv_mod(long long a, long long p)
{
    for (long long x = 1; x < p; ++x) {
        if (mod(a * x, p) == 1) {
            return x;
        }
    }
    return 0;
}

// Solve a * b = 1 term by term.
inline ivec inverse_series(const ivec &a, long long p, std::size_t n)
{
    ivec b(n, 0);
    const auto a0 = inv_mod(a[0], p);
    for (std::size_t m = 0; m < n; ++m) {
        long long acc = m == 0 ? 1 : 0;
        for (std::size_t i = 1; i <= m && i < a.size(); ++i) {
            acc -= a[i] * b[m - i];
        }
        b[m] = mod(acc * a0, p);
    }
    return b;
}

// f(g) by expanding powers of g.
inline ivec substitute(const ivec &f, const ivec &g, long long p, std::size_t n)
{
    ivec r(n, 0), pw(n, 0);
    pw[0] = 1;
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = mod(r[k] + f[i] * pw[k], p);
        }
        pw = mul_series(pw, g, p, n);
    }
    return r;
}

inline ivec to_ints(const orbipar::series &s)
{
    ivec r;
    for (auto c : s.coeffs()) {
        r.push_back(c);
    }
    return r;
}

} // namespace oracle
