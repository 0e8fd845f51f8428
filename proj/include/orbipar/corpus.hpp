#pragma once

#include <cstddef>
#include <vector>

#include <orbipar/cocycle.hpp>
#include <orbipar/error.hpp>
#include <orbipar/local_galois.hpp>
#include <orbipar/matrix.hpp>
#include <orbipar/parabolic.hpp>
#include <orbipar/random.hpp>

namespace orbipar
{

// The same built-in extension at another precision.
inline local_extension rebuild_extension(const local_extension &ext, std::size_t prec)
{
    switch (ext.kind) {
    case extension_kind::trivial:
        return make_trivial_extension(ext.fld, prec);
    case extension_kind::kummer:
        return make_kummer(ext.fld, ext.n, prec);
    case extension_kind::artin_schreier:
        return make_artin_schreier(ext.fld, prec);
    default:
        throw config_error("extension " + ext.name + " cannot be rebuilt at another precision");
    }
}

// s / psi(g)(s), a unit, at the full precision of ext.
inline series unit_ratio(const local_extension &ext, elem g)
{
    const auto big = rebuild_extension(ext, ext.prec + 1);
    const auto &img = big.image(g);
    series u(ext.fld, ext.prec);
    for (std::size_t i = 0; i < ext.prec; ++i) {
        u[i] = img[i + 1];
    }
    return inverse(u);
}

// Matrix over k[[t]] with invertible residue, written in s.
inline series_matrix random_base_unimodular(const local_extension &ext, std::size_t rank, rng &gen)
{
    const auto M = base_precision(ext, ext.prec);
    const auto h = gen.unimodular(ext.fld, rank, M);
    return h.map([&](const series &x) { return evaluate_at_t(ext, x, ext.prec); });
}

// Datum B diag(s^a_i) M with A_g the matching coboundary twist; exponents
// a_i in [0, e). With twist == false all a_i vanish (the induced corpus).
inline parabolic_point random_point(std::string label, const extension_ptr &ext, std::size_t rank, rng &gen,
                                    bool twist = true)
{
    const auto &F = ext->fld;
    const auto N = ext->prec;
    std::vector<std::size_t> a(rank, 0);
    if (twist) {
        for (auto &x : a) {
            x = static_cast<std::size_t>(gen.below(ext->e));
        }
    }
    const auto B = gen.unimodular(F, rank, N);
    const auto M = random_base_unimodular(*ext, rank, gen);
    cocycle psi{ext, rank, {}};
    for (elem g = 0; g < ext->group.order(); ++g) {
        const auto u = unit_ratio(*ext, g);
        series_matrix D(rank, rank, series(F, N));
        for (std::size_t i = 0; i < rank; ++i) {
            auto p = series::one(F, N);
            for (std::size_t k = 0; k < a[i]; ++k) {
                p = p * u;
            }
            D(i, i) = p;
        }
        psi.mats.push_back(B * D * inverse(act(*ext, g, B)));
    }
    laurent_matrix S(rank, rank, laurent(F, 0, N));
    for (std::size_t i = 0; i < rank; ++i) {
        S(i, i) = laurent::monomial(F, static_cast<long>(a[i]), N);
    }
    return {std::move(label), std::move(psi), to_laurent(B) * S * to_laurent(M)};
}

inline parabolic_point sign_twist_point(std::string label, const extension_ptr &ext)
{
    if (ext->kind != extension_kind::kummer || ext->n != 2) {
        throw config_error("the sign twist lives on a degree-2 Kummer extension");
    }
    auto pt = trivial_point(std::move(label), ext, 1);
    pt.psi.mats[1](0, 0) = series::constant(ext->fld, ext->prec, ext->fld->neg(1));
    pt.mu(0, 0) = laurent::monomial(ext->fld, 1, ext->prec);
    return pt;
}

// Tame datum whose residue action of the generator is diag(zeta^a_i),
// conjugated by a matrix congruent to the identity mod s.
inline parabolic_point tame_weight_point(std::string label, const extension_ptr &ext, const std::vector<std::size_t> &a,
                                         rng &gen)
{
    if (ext->kind != extension_kind::kummer) {
        throw config_error("tame weight data need a Kummer extension");
    }
    const auto &F = ext->fld;
    const auto N = ext->prec;
    const auto r = a.size();
    // psi(1)(s) = zeta s: the character s^a has A = zeta^-a; use the diagonal
    // twist by s^(n-a) mod n to land on eigenvalue zeta^a.
    const auto n = ext->n;
    auto pt = trivial_point(std::move(label), ext, r);
    const auto zeta = ext->image(1)[1];
    laurent_matrix S(r, r, laurent(F, 0, N));
    std::vector<fe> ev(r);
    for (std::size_t i = 0; i < r; ++i) {
        const auto b = (n - a[i] % n) % n;
        S(i, i) = laurent::monomial(F, static_cast<long>(b), N);
        ev[i] = F->pow(zeta, static_cast<long long>(a[i] % n));
    }
    const auto U = gen.unipotent_residue(F, r, N);
    for (elem g = 0; g < ext->group.order(); ++g) {
        series_matrix D(r, r, series(F, N));
        for (std::size_t i = 0; i < r; ++i) {
            D(i, i) = series::constant(F, N, F->pow(ev[i], static_cast<long long>(g)));
        }
        pt.psi.mats[g] = U * D * inverse(act(*ext, g, U));
    }
    pt.mu = to_laurent(U) * S;
    return pt;
}

} // namespace orbipar
