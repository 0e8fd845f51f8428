#pragma once

#include <cstddef>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <orbipar/error.hpp>
#include <orbipar/field.hpp>
#include <orbipar/group.hpp>
#include <orbipar/series.hpp>

namespace orbipar
{

enum class extension_kind { trivial, kummer, artin_schreier, custom };

// A finite group acting on k[[s]]/(s^N) through substitutions s -> act[g](s),
// with the ring map psi(g)(f) = f(act[g]). The base uniformizer t lies in
// the invariants and has valuation e.
struct local_extension {
    field_ptr fld;
    std::size_t prec = 0;
    finite_group group;
    std::vector<series> act;
    series t;
    std::size_t e = 1;
    extension_kind kind = extension_kind::custom;
    std::size_t n = 1; // Kummer degree or characteristic for AS
    std::string name;

    const series &image(elem g) const
    {
        return act.at(g);
    }
    // psi(g) applied to f.
    series apply(elem g, const series &f) const
    {
        return substitute(f, act.at(g)).truncate(std::min(f.prec(), prec));
    }
    laurent apply(elem g, const laurent &f) const
    {
        return substitute(f, act.at(g));
    }
    series uniformizer() const
    {
        return series::monomial(fld, prec, 1);
    }
    bool tame_cyclic() const
    {
        return kind == extension_kind::kummer || kind == extension_kind::trivial;
    }
};

using extension_ptr = std::shared_ptr<const local_extension>;

inline extension_ptr share(local_extension ext)
{
    return std::make_shared<const local_extension>(std::move(ext));
}

inline bool same_extension(const local_extension &a, const local_extension &b)
{
    return same_field(a.fld, b.fld) && a.prec == b.prec && a.group == b.group && a.act == b.act && a.t == b.t;
}

namespace detail
{

inline series norm_of_uniformizer(const field_ptr &f, std::size_t prec, const std::vector<series> &act)
{
    auto t = series::one(f, prec);
    for (const auto &a : act) {
        t = t * a;
    }
    return t;
}

} // namespace detail

inline local_extension make_trivial_extension(const field_ptr &f, std::size_t prec)
{
    local_extension ext;
    ext.fld = f;
    ext.prec = prec;
    ext.group = finite_group::trivial();
    ext.act = {series::monomial(f, prec, 1)};
    ext.t = ext.act[0];
    ext.e = 1;
    ext.kind = extension_kind::trivial;
    ext.name = "trivial";
    return ext;
}

// Smallest k' with n | p^k' - 1, or 0 when p divides n.
inline unsigned required_field_degree(std::uint32_t p, std::uint32_t n)
{
    if (n % p == 0) {
        return 0;
    }
    std::uint64_t q = p % n;
    unsigned k = 1;
    while ((q + n - 1) % n != 0) {
        q = q * p % n;
        ++k;
    }
    return k;
}

// Cyclic group Z/n acting by s -> zeta^j s with the canonical primitive
// n-th root zeta.
inline local_extension make_kummer(const field_ptr &f, std::size_t n, std::size_t prec)
{
    if (n == 0) {
        throw config_error("Kummer degree must be positive");
    }
    const auto p = f->characteristic();
    if (n % p == 0) {
        throw config_error("Kummer degree " + std::to_string(n) + " is divisible by the characteristic "
                           + std::to_string(p));
    }
    const auto zeta = f->root_of_unity(static_cast<std::uint32_t>(n));
    if (!zeta) {
        throw config_error("no primitive " + std::to_string(n) + "-th root of unity in " + f->name()
                           + "; need field degree a multiple of "
                           + std::to_string(required_field_degree(p, static_cast<std::uint32_t>(n))));
    }
    if (n == 1) {
        return make_trivial_extension(f, prec);
    }
    local_extension ext;
    ext.fld = f;
    ext.prec = prec;
    ext.group = finite_group::cyclic(n);
    for (std::size_t j = 0; j < n; ++j) {
        ext.act.push_back(series::monomial(f, prec, 1, f->pow(*zeta, static_cast<long long>(j))));
    }
    ext.t = detail::norm_of_uniformizer(f, prec, ext.act);
    ext.e = n;
    ext.kind = extension_kind::kummer;
    ext.n = n;
    ext.name = "kummer(" + std::to_string(n) + ")";
    return ext;
}

// Z/p acting by s -> s/(1+cs).
inline local_extension make_artin_schreier(const field_ptr &f, std::size_t prec)
{
    const auto p = f->characteristic();
    local_extension ext;
    ext.fld = f;
    ext.prec = prec;
    ext.group = finite_group::cyclic(p);
    const auto s = series::monomial(f, prec, 1);
    for (std::uint32_t c = 0; c < p; ++c) {
        auto den = series::one(f, prec);
        if (prec > 1) {
            den[1] = c;
        }
        ext.act.push_back(s * inverse(den));
    }
    ext.t = detail::norm_of_uniformizer(f, prec, ext.act);
    ext.e = p;
    ext.kind = extension_kind::artin_schreier;
    ext.n = p;
    ext.name = "artin-schreier(" + std::to_string(p) + ")";
    return ext;
}

// Any finite group acting by the given substitutions; t is the norm of s.
inline local_extension make_custom_extension(const field_ptr &f, finite_group group, std::vector<series> act,
                                             std::string name = "custom")
{
    if (act.size() != group.order() || act.empty()) {
        throw config_error("custom extension needs one substitution per group element");
    }
    local_extension ext;
    ext.fld = f;
    ext.prec = act[0].prec();
    ext.group = std::move(group);
    ext.act = std::move(act);
    ext.t = detail::norm_of_uniformizer(f, ext.prec, ext.act);
    ext.e = ext.group.order();
    ext.kind = extension_kind::custom;
    ext.n = ext.e;
    ext.name = std::move(name);
    return ext;
}

// s^p / (1 - s^(p-1)), the closed form of the AS base uniformizer.
inline series artin_schreier_closed_form(const field_ptr &f, std::size_t prec)
{
    const auto p = f->characteristic();
    auto den = series::one(f, prec);
    if (p - 1 < prec) {
        den[p - 1] = f->neg(1);
    }
    return series::monomial(f, prec, p) * inverse(den);
}

inline bool is_identity_substitution(const series &a)
{
    for (std::size_t i = 0; i < a.prec(); ++i) {
        if (a[i] != (i == 1 ? 1u : 0u)) {
            return false;
        }
    }
    return true;
}

// Homomorphism law psi(h)(act[g]) = act[hg] for all pairs, invariance of t,
// valuation(t) = e.
inline check_result verify_extension(const local_extension &ext)
{
    const auto &G = ext.group;
    if (ext.act.size() != G.order()) {
        return check_result::fail("action table has " + std::to_string(ext.act.size()) + " entries for a group of order "
                                  + std::to_string(G.order()));
    }
    for (elem g = 0; g < G.order(); ++g) {
        const auto &a = ext.act[g];
        if (a.prec() != ext.prec || a[0] != 0 || ext.prec < 2 || a[1] == 0) {
            return check_result::fail("act(" + std::to_string(g) + ") is not a substitution automorphism");
        }
    }
    if (!is_identity_substitution(ext.act[0])) {
        return check_result::fail("act(e) is not the identity substitution");
    }
    for (elem h = 0; h < G.order(); ++h) {
        for (elem g = 0; g < G.order(); ++g) {
            const auto lhs = substitute(ext.act[g], ext.act[h]);
            const auto &rhs = ext.act[G.mul(h, g)];
            for (std::size_t i = 0; i < ext.prec; ++i) {
                if (lhs[i] != rhs[i]) {
                    return check_result::fail("homomorphism law fails at pair (" + std::to_string(h) + ","
                                              + std::to_string(g) + "), coefficient " + std::to_string(i));
                }
            }
        }
    }
    for (elem g = 0; g < G.order(); ++g) {
        const auto moved = ext.apply(g, ext.t);
        for (std::size_t i = 0; i < ext.prec; ++i) {
            if (moved[i] != ext.t[i]) {
                return check_result::fail("t is not invariant under element " + std::to_string(g) + ", coefficient "
                                          + std::to_string(i));
            }
        }
    }
    if (ext.t.valuation() != ext.e) {
        return check_result::fail("valuation of t is " + std::to_string(ext.t.valuation()) + ", expected e = "
                                  + std::to_string(ext.e));
    }
    return check_result::pass();
}

// Number of base coefficients recoverable from N = prec coefficients in s.
inline std::size_t base_precision(const local_extension &ext, std::size_t prec)
{
    return (prec + ext.e - 1) / ext.e;
}

// h with h(t(s)) = f(s) mod s^prec(f), found greedily from the bottom.
inline series rewrite_in_base(const local_extension &ext, const series &f)
{
    const auto N = std::min(f.prec(), ext.prec);
    const auto &F = *ext.fld;
    const auto M = base_precision(ext, N);
    const auto t = ext.t.truncate(N);
    const auto lead_inv = F.inv(t[ext.e]);
    series h(ext.fld, M);
    auto rem = f.truncate(N);
    // powers of t, built on demand
    std::vector<series> tp{series::one(ext.fld, N)};
    while (!rem.is_zero()) {
        const auto v = rem.valuation();
        if (v % ext.e != 0) {
            throw not_invariant("series is not invariant", v);
        }
        const auto j = v / ext.e;
        while (tp.size() <= j) {
            tp.push_back(tp.back() * t);
        }
        const auto c = F.mul(rem[v], F.pow(lead_inv, static_cast<long long>(j)));
        h[j] = c;
        rem -= tp[j].scaled(c);
    }
    return h;
}

// h(t(s)) at precision N.
inline series evaluate_at_t(const local_extension &ext, const series &h, std::size_t prec)
{
    const auto t = ext.t.truncate(prec);
    if (h.prec() * ext.e < prec) {
        throw precision_error("base series too short for requested precision", h.prec() * ext.e);
    }
    return substitute(h, t).truncate(prec);
}

// Laurent version: h(t) for h a Laurent value in t.
inline laurent evaluate_at_t(const local_extension &ext, const laurent &h)
{
    return substitute(h, ext.t);
}

// Small extension inside a big one: s_small -> s_image(s_big), with the
// induced surjection of groups.
struct extension_embedding {
    local_extension small;
    local_extension big;
    series s_image;
    std::vector<elem> quotient;

    // psi applied to a small-ring series pulled into the big ring.
    series pull(const series &f) const
    {
        const auto r = substitute(f, s_image);
        return r.truncate(std::min(big.prec, r.prec()));
    }
    laurent pull(const laurent &f) const
    {
        return substitute(f, s_image);
    }
};

inline check_result verify_embedding(const extension_embedding &emb)
{
    const auto &S = emb.small;
    const auto &B = emb.big;
    if (!same_field(S.fld, B.fld)) {
        return check_result::fail("embedding between different fields");
    }
    if (B.e % S.e != 0 || emb.s_image.valuation() != B.e / S.e) {
        return check_result::fail("s_image has valuation " + std::to_string(emb.s_image.valuation()) + ", expected "
                                  + std::to_string(B.e % S.e == 0 ? B.e / S.e : 0));
    }
    if (emb.quotient.size() != B.group.order()) {
        return check_result::fail("group quotient has the wrong size");
    }
    std::vector<bool> hit(S.group.order(), false);
    for (elem g = 0; g < B.group.order(); ++g) {
        if (emb.quotient[g] >= S.group.order()) {
            return check_result::fail("group quotient image out of range at " + std::to_string(g));
        }
        hit[emb.quotient[g]] = true;
        for (elem h = 0; h < B.group.order(); ++h) {
            if (emb.quotient[B.group.mul(g, h)] != S.group.mul(emb.quotient[g], emb.quotient[h])) {
                return check_result::fail("group quotient is not a homomorphism at (" + std::to_string(g) + ","
                                          + std::to_string(h) + ")");
            }
        }
    }
    for (bool b : hit) {
        if (!b) {
            return check_result::fail("group quotient is not surjective");
        }
    }
    for (elem g = 0; g < B.group.order(); ++g) {
        const auto lhs = substitute(S.act[emb.quotient[g]], emb.s_image);
        const auto rhs = substitute(emb.s_image, B.act[g]);
        const auto n = std::min(lhs.prec(), rhs.prec());
        for (std::size_t i = 0; i < n; ++i) {
            if (lhs[i] != rhs[i]) {
                return check_result::fail("embedding does not intertwine the actions at element " + std::to_string(g)
                                          + ", coefficient " + std::to_string(i));
            }
        }
    }
    const auto ts = substitute(S.t, emb.s_image);
    const auto n = std::min(ts.prec(), B.t.prec());
    for (std::size_t i = 0; i < n; ++i) {
        if (ts[i] != B.t[i]) {
            return check_result::fail("base uniformizers disagree at coefficient " + std::to_string(i));
        }
    }
    return check_result::pass();
}

inline extension_embedding make_embedding(local_extension small, local_extension big, series s_image,
                                          std::vector<elem> quotient)
{
    extension_embedding emb{std::move(small), std::move(big), std::move(s_image), std::move(quotient)};
    const auto r = verify_embedding(emb);
    if (!r) {
        throw config_error("invalid extension embedding: " + r.message);
    }
    return emb;
}

inline extension_embedding identity_embedding(const local_extension &ext)
{
    std::vector<elem> q(ext.group.order());
    std::iota(q.begin(), q.end(), elem{0});
    return make_embedding(ext, ext, ext.uniformizer(), std::move(q));
}

// Kummer(n) inside Kummer(m) for n | m: s = c s'^(m/n) with c = +-1 chosen
// so the base uniformizers agree, and j -> j mod n on groups.
inline extension_embedding kummer_tower(const field_ptr &f, std::size_t n, std::size_t m, std::size_t prec)
{
    if (n == 0 || m % n != 0) {
        throw config_error("Kummer tower needs n | m");
    }
    auto small = make_kummer(f, n, prec);
    auto big = make_kummer(f, m, prec);
    const auto d = m / n;
    // norms are (-1)^(n-1) s^n and (-1)^(m-1) s'^m
    const bool flip = ((m - 1) % 2) != ((n - 1) % 2);
    const fe c = flip ? f->neg(1) : 1;
    auto s_image = series::monomial(f, prec, d, c);
    std::vector<elem> q(m);
    for (std::size_t j = 0; j < m; ++j) {
        q[j] = j % n;
    }
    return make_embedding(std::move(small), std::move(big), std::move(s_image), std::move(q));
}

} // namespace orbipar
