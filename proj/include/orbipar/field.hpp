#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <orbipar/error.hpp>

namespace orbipar
{

// Field element of GF(p^k), encoded as sum_i c_i p^i where c_0..c_{k-1} are
// the coefficients of its representative polynomial modulo the stored modulus.
using fe = std::uint32_t;

class field;
using field_ptr = std::shared_ptr<const field>;

namespace detail
{

inline bool is_prime(std::uint32_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

// Polynomials over GF(p) as little-endian coefficient vectors.
using poly = std::vector<std::uint32_t>;

inline void poly_trim(poly &a)
{
    while (!a.empty() && a.back() == 0) {
        a.pop_back();
    }
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p)
{
    // p prime, a != 0 mod p
    std::uint64_t r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

// Remainder of a modulo the nonzero polynomial m.
inline poly poly_rem(poly a, const poly &m, std::uint32_t p)
{
    poly_trim(a);
    const auto dm = m.size() - 1;
    const auto lead_inv = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        const auto shift = a.size() - m.size();
        const std::uint64_t c = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
        for (std::size_t i = 0; i <= dm; ++i) {
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
        }
        poly_trim(a);
    }
    return a;
}

// Exhaustive trial division by monic polynomials of degree 1..deg/2.
inline bool poly_irreducible(const poly &m, std::uint32_t p)
{
    const auto deg = m.size() - 1;
    if (deg == 0) {
        return false;
    }
    if (deg == 1) {
        return true;
    }
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) {
            count *= p;
        }
        for (std::uint64_t code = 0; code < count; ++code) {
            poly f(d + 1);
            auto c = code;
            for (std::size_t i = 0; i < d; ++i) {
                f[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            f[d] = 1;
            if (poly_rem(m, f, p).empty()) {
                return false;
            }
        }
    }
    return true;
}

} // namespace detail

// GF(p^k) presented as GF(p)[x]/(modulus). Equality is structural: same p,
// same degree, same stored modulus. Immutable after construction.
class field
{
public:
    // Validates p and irreducibility of the monic modulus (length k+1).
    static field_ptr make(std::uint32_t p, unsigned k_deg, std::vector<std::uint32_t> modulus)
    {
        return std::shared_ptr<const field>(new field(p, k_deg, std::move(modulus)));
    }

    // Uses x for k = 1, else the smallest irreducible monic modulus in
    // little-endian base-p order.
    static field_ptr make(std::uint32_t p, unsigned k_deg = 1)
    {
        if (!detail::is_prime(p)) {
            throw config_error("field characteristic " + std::to_string(p) + " is not prime");
        }
        if (k_deg == 0) {
            throw config_error("field extension degree must be positive");
        }
        return make(p, k_deg, smallest_irreducible(p, k_deg));
    }

    static std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, unsigned k_deg)
    {
        if (k_deg == 1) {
            return {0, 1};
        }
        std::uint64_t count = 1;
        for (unsigned i = 0; i < k_deg; ++i) {
            count *= p;
        }
        for (std::uint64_t code = 0; code < count; ++code) {
            detail::poly m(k_deg + 1);
            auto c = code;
            for (unsigned i = 0; i < k_deg; ++i) {
                m[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            m[k_deg] = 1;
            if (detail::poly_irreducible(m, p)) {
                return m;
            }
        }
        throw config_error("no irreducible polynomial found");
    }

    std::uint32_t characteristic() const noexcept
    {
        return p_;
    }
    unsigned degree() const noexcept
    {
        return k_;
    }
    const std::vector<std::uint32_t> &modulus() const noexcept
    {
        return modulus_;
    }
    std::uint32_t size() const noexcept
    {
        return q_;
    }

    fe zero() const noexcept
    {
        return 0;
    }
    fe one() const noexcept
    {
        return 1;
    }

    // Embedding of an integer through the prime field.
    fe from_int(long long v) const noexcept
    {
        auto r = v % static_cast<long long>(p_);
        if (r < 0) {
            r += p_;
        }
        return static_cast<fe>(r);
    }

    bool contains(fe a) const noexcept
    {
        return a < q_;
    }

    fe add(fe a, fe b) const noexcept
    {
        if (k_ == 1) {
            const auto s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        fe r = 0, w = 1;
        for (unsigned i = 0; i < k_; ++i) {
            const auto d = (a % p_ + b % p_) % p_;
            r += d * w;
            w *= p_;
            a /= p_;
            b /= p_;
        }
        return r;
    }

    fe neg(fe a) const noexcept
    {
        if (k_ == 1) {
            return a == 0 ? 0 : p_ - a;
        }
        fe r = 0, w = 1;
        for (unsigned i = 0; i < k_; ++i) {
            const auto d = a % p_;
            r += (d == 0 ? 0 : p_ - d) * w;
            w *= p_;
            a /= p_;
        }
        return r;
    }

    fe sub(fe a, fe b) const noexcept
    {
        return add(a, neg(b));
    }

    fe mul(fe a, fe b) const noexcept
    {
        if (a == 0 || b == 0) {
            return 0;
        }
        return exp_[log_[a] + log_[b]];
    }

    fe inv(fe a) const
    {
        if (a == 0) {
            throw domain_error("division by zero in GF(" + std::to_string(p_) + "^" + std::to_string(k_) + ")");
        }
        return exp_[(q_ - 1) - log_[a]];
    }

    fe div(fe a, fe b) const
    {
        return mul(a, inv(b));
    }

    fe pow(fe a, long long e) const
    {
        if (a == 0) {
            if (e <= 0) {
                throw domain_error("zero raised to a non-positive power");
            }
            return 0;
        }
        const long long order = q_ - 1;
        auto r = (static_cast<long long>(log_[a]) * (e % order)) % order;
        if (r < 0) {
            r += order;
        }
        return exp_[static_cast<std::size_t>(r)];
    }

    // Canonical generator of the multiplicative group: the primitive element
    // with the smallest encoding.
    fe primitive() const noexcept
    {
        return gen_;
    }

    // Discrete logarithm to the canonical generator.
    std::uint32_t log(fe a) const
    {
        if (a == 0) {
            throw domain_error("logarithm of zero");
        }
        return log_[a];
    }

    // Canonical primitive n-th root of unity gen^((q-1)/n): the one with the
    // smallest discrete logarithm. Empty if n does not divide q-1.
    std::optional<fe> root_of_unity(std::uint32_t n) const
    {
        if (n == 0 || (q_ - 1) % n != 0) {
            return std::nullopt;
        }
        return exp_[(q_ - 1) / n];
    }

    std::uint32_t multiplicative_order(fe a) const
    {
        const auto l = log(a);
        return (q_ - 1) / std::gcd(q_ - 1, l);
    }

    friend bool operator==(const field &a, const field &b) noexcept
    {
        return a.p_ == b.p_ && a.k_ == b.k_ && a.modulus_ == b.modulus_;
    }

    std::string name() const
    {
        return k_ == 1 ? "GF(" + std::to_string(p_) + ")" : "GF(" + std::to_string(p_) + "^" + std::to_string(k_) + ")";
    }

private:
    field(std::uint32_t p, unsigned k_deg, std::vector<std::uint32_t> modulus)
        : p_(p), k_(k_deg), modulus_(std::move(modulus))
    {
        if (!detail::is_prime(p_)) {
            throw config_error("field characteristic " + std::to_string(p_) + " is not prime");
        }
        if (k_ == 0 || modulus_.size() != k_ + 1u || modulus_.back() != 1) {
            throw config_error("modulus must be monic of degree " + std::to_string(k_));
        }
        for (auto c : modulus_) {
            if (c >= p_) {
                throw config_error("modulus coefficient out of range for characteristic " + std::to_string(p_));
            }
        }
        if (!detail::poly_irreducible(modulus_, p_)) {
            throw config_error("modulus is reducible over GF(" + std::to_string(p_) + ")");
        }
        q_ = 1;
        for (unsigned i = 0; i < k_; ++i) {
            q_ *= p_;
        }
        build_tables();
    }

    fe slow_mul(fe a, fe b) const
    {
        detail::poly pa(k_), pb(k_);
        for (unsigned i = 0; i < k_; ++i) {
            pa[i] = a % p_;
            a /= p_;
            pb[i] = b % p_;
            b /= p_;
        }
        detail::poly prod(2 * k_, 0);
        for (unsigned i = 0; i < k_; ++i) {
            for (unsigned j = 0; j < k_; ++j) {
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t(pa[i]) * pb[j]) % p_);
            }
        }
        auto r = detail::poly_rem(prod, modulus_, p_);
        fe out = 0, w = 1;
        for (std::size_t i = 0; i < r.size(); ++i) {
            out += r[i] * w;
            w *= p_;
        }
        return out;
    }

    void build_tables()
    {
        const auto order = q_ - 1;
        log_.assign(q_, 0);
        exp_.assign(2 * static_cast<std::size_t>(q_), 0);
        if (q_ == 2) {
            gen_ = 1;
            exp_[0] = exp_[1] = exp_[2] = 1;
            return;
        }
        for (fe g = 2; g < q_; ++g) {
            // powers of g until we return to 1
            std::uint32_t ord = 1;
            fe x = g;
            while (x != 1) {
                x = slow_mul(x, g);
                ++ord;
            }
            if (ord == order) {
                gen_ = g;
                break;
            }
        }
        if (gen_ == 0) {
            throw config_error("no primitive element found");
        }
        fe x = 1;
        for (std::uint32_t i = 0; i < order; ++i) {
            exp_[i] = x;
            exp_[i + order] = x;
            log_[x] = i;
            x = slow_mul(x, gen_);
        }
        exp_[2 * static_cast<std::size_t>(order)] = 1;
    }

    std::uint32_t p_;
    unsigned k_;
    std::vector<std::uint32_t> modulus_;
    std::uint32_t q_ = 0;
    fe gen_ = 0;
    std::vector<std::uint32_t> log_;
    std::vector<fe> exp_;
};

inline bool same_field(const field_ptr &a, const field_ptr &b) noexcept
{
    return a == b || (a && b && *a == *b);
}

} // namespace orbipar
